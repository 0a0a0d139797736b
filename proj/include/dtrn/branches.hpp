#pragma once

// Per-coordinate branch systems. Coordinate j evolves under one of the affine
// branches x -> a*x + (1-a)*eta with eta drawn from the subset sums of column
// j's weights. Whether consecutive branch images of [0,1] stay disjoint decides
// coordinatewise injectivity; the critical contraction a0 = delta/(1+delta)
// comes from the smallest offset gap delta.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "network.hpp"

namespace dtrn {

struct ColumnBranchSystem {
  int j = 0;
  std::vector<int> in_neighbors;         // tails i with K[i][j] > 0, ascending
  std::vector<Rational> offsets;         // distinct subset sums, ascending
  std::vector<std::uint32_t> mask_to_offset;  // 2^indeg entries -> index into offsets
};

struct BranchSystems {
  std::vector<ColumnBranchSystem> cols;
};

inline BranchSystems branch_systems(const NetworkSpec& sp, int indeg_cap = 20) {
  BranchSystems bs;
  bs.cols.resize(static_cast<std::size_t>(sp.d));
  for (int j = 0; j < sp.d; ++j) {
    auto& col = bs.cols[static_cast<std::size_t>(j)];
    col.j = j;
    for (int i = 0; i < sp.d; ++i)
      if (sp.K[i][j] > 0) col.in_neighbors.push_back(i);
    int indeg = static_cast<int>(col.in_neighbors.size());
    if (indeg > indeg_cap)
      throw std::invalid_argument("branch_systems: indegree " + std::to_string(indeg) +
                                  " exceeds cap " + std::to_string(indeg_cap));
    std::uint32_t n = 1u << indeg;
    std::vector<Rational> sums(n, Rational(0));
    for (std::uint32_t m = 1; m < n; ++m) {
      std::uint32_t low = m & (m - 1);
      int bit = __builtin_ctz(m);
      sums[m] = sums[low] + sp.K[col.in_neighbors[static_cast<std::size_t>(bit)]][j];
    }
    std::vector<std::uint32_t> order(n);
    for (std::uint32_t m = 0; m < n; ++m) order[m] = m;
    std::sort(order.begin(), order.end(),
              [&sums](std::uint32_t a, std::uint32_t b) { return sums[a] < sums[b]; });
    col.mask_to_offset.assign(n, 0);
    for (std::uint32_t k = 0; k < n; ++k) {
      std::uint32_t m = order[k];
      if (col.offsets.empty() || sums[m] != col.offsets.back()) col.offsets.push_back(sums[m]);
      col.mask_to_offset[m] = static_cast<std::uint32_t>(col.offsets.size() - 1);
    }
  }
  return bs;
}

struct DegeneracyWitness {
  int j = 0;
  std::uint32_t mask_a = 0, mask_b = 0;  // distinct subsets with equal weight sums
};

// A column is degenerate when two different subsets of its weights sum equally,
// i.e. fewer than 2^indeg distinct offsets.
inline std::optional<DegeneracyWitness> degeneracy_witness(const BranchSystems& bs) {
  for (const auto& col : bs.cols) {
    std::uint32_t n = 1u << col.in_neighbors.size();
    if (col.offsets.size() == n) continue;
    std::vector<std::uint32_t> first(col.offsets.size(), 0);
    std::vector<bool> seen(col.offsets.size(), false);
    for (std::uint32_t m = 0; m < n; ++m) {
      std::uint32_t oi = col.mask_to_offset[m];
      if (seen[oi]) return DegeneracyWitness{col.j, first[oi], m};
      seen[oi] = true;
      first[oi] = m;
    }
  }
  return std::nullopt;
}

inline bool non_degenerate(const BranchSystems& bs) { return !degeneracy_witness(bs).has_value(); }

struct InjectivityWitness {
  int j = 0;
  Rational eta_low, eta_high;  // consecutive offsets whose branch images of [0,1] meet
};

struct InjectivityReport {
  std::optional<Rational> delta;  // min offset gap over all columns; empty if no column branches
  Rational a0;                    // delta/(1+delta); 1 when delta is empty
  bool injective_at_a = false;
  std::vector<InjectivityWitness> witnesses;  // one per failing column
};

// Exact disjointness test: branches with consecutive offsets eta' < eta have
// images [.., a + (1-a)*eta'] and [(1-a)*eta, ..]; they are disjoint iff
// a + (1-a)*eta' < (1-a)*eta. Touching endpoints count as a failure.
inline InjectivityReport injectivity_analysis(const NetworkSpec& sp, const BranchSystems& bs) {
  InjectivityReport rep;
  rep.injective_at_a = true;
  Rational one_minus_a = 1 - sp.a;
  for (const auto& col : bs.cols) {
    bool col_ok = true;
    for (std::size_t k = 0; k + 1 < col.offsets.size(); ++k) {
      Rational gap = col.offsets[k + 1] - col.offsets[k];
      if (!rep.delta || gap < *rep.delta) rep.delta = gap;
      if (col_ok && !(sp.a + one_minus_a * col.offsets[k] < one_minus_a * col.offsets[k + 1])) {
        rep.witnesses.push_back({col.j, col.offsets[k], col.offsets[k + 1]});
        rep.injective_at_a = false;
        col_ok = false;
      }
    }
  }
  rep.a0 = rep.delta ? *rep.delta / (1 + *rep.delta) : Rational(1);
  return rep;
}

inline InjectivityReport injectivity_analysis(const NetworkSpec& sp) {
  auto bs = branch_systems(sp);
  return injectivity_analysis(sp, bs);
}

}  // namespace dtrn
