#pragma once

// Slow reference routes for cross-checking the partition engine.
//
// oracle_atoms grows the dynamical partition by the most literal method
// available: pick an interior representative of each atom, read the branch off
// heaviside_term at that point, map the box through the affine branch, and
// intersect the image against every base atom by linear scan. No shared code
// with the engine's scaled arithmetic, signature masks, or piece search.
//
// grid_complexity simulates a finite set of exact rational points and counts
// distinct itinerary prefixes in a trie. It is a lower bound on C(t) by
// construction and equals it once every atom of the horizon partition contains
// a sample point; min_atom_width says which resolutions guarantee that.

#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "base_partition.hpp"
#include "network.hpp"
#include "rect.hpp"

namespace dtrn {

struct OracleAtom {
  Rect rect;
  std::vector<std::uint32_t> word;
};

namespace oracle_detail {

inline std::vector<Rect> base_rects(const BasePartition& bp) {
  std::size_t d = bp.coords.size();
  if (!bp.total_fits) throw std::runtime_error("oracle: base partition too large");
  std::vector<Rect> out;
  out.reserve(bp.total_ull);
  std::vector<std::size_t> odo(d, 0);
  for (unsigned long long f = 0; f < bp.total_ull; ++f) {
    Rect r;
    r.sides.reserve(d);
    for (std::size_t i = 0; i < d; ++i) r.sides.push_back(bp.coords[i].atoms[odo[i]].iv);
    out.push_back(std::move(r));
    for (std::size_t i = d; i-- > 0;) {
      if (++odo[i] < bp.coords[i].atoms.size()) break;
      odo[i] = 0;
    }
  }
  return out;
}

}  // namespace oracle_detail

inline std::vector<OracleAtom> oracle_step(const NetworkSpec& sp,
                                           const std::vector<Rect>& base,
                                           const std::vector<OracleAtom>& atoms,
                                           const std::vector<Rational>* offset = nullptr) {
  std::size_t d = static_cast<std::size_t>(sp.d);
  std::vector<OracleAtom> next;
  for (const auto& atom : atoms) {
    std::vector<Rational> rep(d);
    for (std::size_t i = 0; i < d; ++i) rep[i] = interval_representative(atom.rect.sides[i]);
    // the affine branch at the representative applies to the whole atom
    Rect image;
    image.sides.resize(d);
    for (std::size_t j = 0; j < d; ++j) {
      Rational acc;
      for (int i = 0; i < sp.d; ++i) {
        std::size_t ii = static_cast<std::size_t>(i);
        if (sp.K[ii][j] == 0) continue;
        acc += sp.K[ii][j] * heaviside_term(sp.s[ii][j], rep[ii], sp.T[ii][j]);
      }
      if (offset) acc += (*offset)[j];
      Rational b = (1 - sp.a) * acc;
      const auto& side = atom.rect.sides[j];
      image.sides[j] = sp.a == 0 ? FlaggedInterval{b, b, true, true}
                                 : FlaggedInterval{sp.a * side.lo + b, sp.a * side.hi + b,
                                                   side.lo_closed, side.hi_closed};
    }
    for (std::size_t f = 0; f < base.size(); ++f) {
      auto inter = rect_intersect(image, base[f]);
      if (!inter) continue;
      OracleAtom child;
      child.rect = std::move(*inter);
      child.word = atom.word;
      child.word.push_back(static_cast<std::uint32_t>(f));
      next.push_back(std::move(child));
    }
  }
  return next;
}

struct OracleResult {
  std::vector<unsigned long long> C;  // C[k] = C(k+1)
  std::vector<OracleAtom> atoms;      // horizon generation
};

inline OracleResult oracle_run(const NetworkSpec& sp, long t_max,
                               const std::vector<ExtraCut>& extra = {}) {
  require_valid(sp);
  auto bp = base_partition(sp, extra);
  auto base = oracle_detail::base_rects(bp);
  OracleResult res;
  std::vector<OracleAtom> gen;
  gen.reserve(base.size());
  for (std::size_t f = 0; f < base.size(); ++f)
    gen.push_back(OracleAtom{base[f], {static_cast<std::uint32_t>(f)}});
  res.C.push_back(gen.size());
  for (long t = 1; t < t_max; ++t) {
    const std::vector<Rational>* off = nullptr;
    if (sp.mode == Mode::sequence && sp.offsets) {
      if (t > sp.offsets->steps_available()) break;
      off = &sp.offsets->at(t);
    }
    gen = oracle_step(sp, base, gen, off);
    res.C.push_back(gen.size());
  }
  res.atoms = std::move(gen);
  return res;
}

// smallest positive side width over a generation; singleton sides are skipped
// (they sit on thresholds and need exact sample points, not resolution)
inline std::optional<Rational> min_atom_width(const std::vector<OracleAtom>& atoms) {
  std::optional<Rational> best;
  for (const auto& atom : atoms)
    for (const auto& side : atom.rect.sides) {
      Rational w = interval_width(side);
      if (w == 0) continue;
      if (!best || w < *best) best = w;
    }
  return best;
}

struct GridResult {
  std::vector<unsigned long long> C;  // distinct itinerary prefixes per length
  unsigned long long points = 0;
};

// uniform grid k/R per axis, plus every cut value, so zero-width atoms are hit
inline std::vector<Rational> grid_axis(const NetworkSpec& sp, int coord, long R) {
  std::vector<Rational> vals;
  for (long k = 0; k <= R; ++k) vals.push_back(make_rational(k, R));
  for (int j = 0; j < sp.d; ++j)
    if (sp.K[static_cast<std::size_t>(coord)][static_cast<std::size_t>(j)] > 0)
      vals.push_back(sp.T[static_cast<std::size_t>(coord)][static_cast<std::size_t>(j)]);
  std::sort(vals.begin(), vals.end());
  vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
  return vals;
}

inline GridResult grid_complexity(const NetworkSpec& sp, long t_max,
                                  const std::vector<std::vector<Rational>>& axes) {
  require_valid(sp);
  auto bp = base_partition(sp);
  std::size_t d = static_cast<std::size_t>(sp.d);
  if (axes.size() != d) throw std::invalid_argument("grid_complexity: need one axis list per coordinate");
  // trie over symbols; level counts are the distinct prefix counts
  std::vector<std::map<std::uint32_t, std::uint32_t>> nodes(1);
  GridResult res;
  res.C.assign(static_cast<std::size_t>(t_max), 0);
  std::vector<std::size_t> odo(d, 0);
  bool done = false;
  std::vector<Rational> x(d);
  while (!done) {
    for (std::size_t i = 0; i < d; ++i) x[i] = axes[i][odo[i]];
    ++res.points;
    std::uint32_t node = 0;
    std::vector<Rational> cur = x;
    for (long t = 0; t < t_max; ++t) {
      auto idx = classify_point(bp, cur);
      std::uint32_t sym = static_cast<std::uint32_t>(bp.flat_index(idx));
      auto it = nodes[node].find(sym);
      if (it == nodes[node].end()) {
        std::uint32_t fresh = static_cast<std::uint32_t>(nodes.size());
        nodes[node].emplace(sym, fresh);
        nodes.emplace_back();
        ++res.C[static_cast<std::size_t>(t)];
        node = fresh;
      } else {
        node = it->second;
      }
      if (t + 1 < t_max) cur = evaluate_map(sp, cur);
    }
    done = true;
    for (std::size_t i = d; i-- > 0;) {
      if (++odo[i] < axes[i].size()) {
        done = false;
        break;
      }
      odo[i] = 0;
    }
  }
  return res;
}

inline GridResult grid_complexity(const NetworkSpec& sp, long t_max, long R) {
  std::vector<std::vector<Rational>> axes;
  for (int i = 0; i < sp.d; ++i) axes.push_back(grid_axis(sp, i, R));
  return grid_complexity(sp, t_max, axes);
}

}  // namespace dtrn
