#pragma once

// Complexity bound curves and their verification against measured C(t).
// Curves are sparse integer polynomials, optionally scaled pointwise by a
// measured base complexity sequence (the skew form). All arithmetic is exact.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "base_partition.hpp"
#include "branches.hpp"
#include "engine.hpp"
#include "graph.hpp"
#include "network.hpp"
#include "rational.hpp"

namespace dtrn {

inline BigInt ipow(const BigInt& b, unsigned e) {
  BigInt r;
  mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
  return r;
}

inline BigInt ipow(unsigned long long b, unsigned e) { return ipow(to_bigint(b), e); }

struct BoundCurve {
  std::string name;
  std::vector<std::pair<unsigned, BigInt>> terms;   // (degree, coefficient)
  std::vector<unsigned long long> base_counts;      // skew: multiply by C_b(t)

  BigInt eval(long t) const {
    BigInt v = 0;
    for (const auto& [deg, coeff] : terms) v += coeff * ipow(BigInt(t), deg);
    if (!base_counts.empty()) {
      if (t < 1 || static_cast<std::size_t>(t) > base_counts.size())
        throw std::out_of_range("BoundCurve: no base count for t=" + std::to_string(t));
      v *= to_bigint(base_counts[static_cast<std::size_t>(t - 1)]);
    }
    return v;
  }
  long max_t() const {
    return base_counts.empty() ? std::numeric_limits<long>::max()
                               : static_cast<long>(base_counts.size());
  }
};

// 1 + c(1 + c^d t^d) with c = #P - 1
inline BoundCurve coarse_bound(const BigInt& atom_count, unsigned d) {
  BigInt c = atom_count - 1;
  BoundCurve b;
  b.name = "coarse";
  b.terms = {{0u, 1 + c}, {d, ipow(c, d + 1)}};
  return b;
}

inline BoundCurve coarse_bound(const NetworkSpec& sp) {
  auto bp = base_partition(sp);
  return coarse_bound(bp.total, static_cast<unsigned>(sp.d));
}

// 1 + c1(1 + c2 t^q) from a certified reduction: q = |W|, c1 = #P - 1,
// c2 = #P * c1^q * prod_{j in W} n_j where n_j = max(m_j, #P_j),
// m_j = (#P_j - 1) + sum_{i in R_j} #P_j (#P_i - 1), and R_j holds the chosen
// driver when j is a removed loop's end
struct DegreeBoundParams {
  BigInt M, c1, c2;
  unsigned q = 0;
  std::vector<std::pair<int, BigInt>> n_factors;  // (j, n_j) for j in W
};

inline DegreeBoundParams degree_bound_params(const NetworkSpec& sp, const BasePartition& bp,
                                             const DegreeReduction& red) {
  DegreeBoundParams p;
  p.M = bp.total;
  p.c1 = p.M - 1;
  p.q = red.q;
  std::vector<int> driver_of(static_cast<std::size_t>(sp.d), -1);
  for (const auto& loop : red.loops) driver_of[static_cast<std::size_t>(loop.end)] = loop.driver;
  BigInt prod = 1;
  for (int j : red.W) {
    BigInt Pj(bp.coords[static_cast<std::size_t>(j)].atoms.size());
    BigInt mj = Pj - 1;
    if (int i = driver_of[static_cast<std::size_t>(j)]; i >= 0) {
      BigInt Pi(bp.coords[static_cast<std::size_t>(i)].atoms.size());
      mj += Pj * (Pi - 1);
    }
    BigInt nj = mj > Pj ? mj : Pj;
    p.n_factors.emplace_back(j, nj);
    prod *= nj;
  }
  p.c2 = p.M * ipow(p.c1, p.q) * prod;
  return p;
}

inline BoundCurve degree_bound(const DegreeBoundParams& p) {
  BoundCurve b;
  b.name = "degree-" + std::to_string(p.q);
  b.terms = {{0u, 1 + p.c1}, {p.q, p.c1 * p.c2}};
  return b;
}

// pinned envelopes for the negative 2-circuit
inline BoundCurve negative_two_circuit_bound(const Rational& a) {
  BoundCurve b;
  if (a < make_rational(1, 2)) {
    b.name = "neg2-affine";
    b.terms = {{0u, BigInt(2)}, {1u, BigInt(2)}};  // 2t + 2
  } else {
    b.name = "neg2-quadratic";
    b.terms = {{2u, BigInt(4)}};  // 4 t^2
  }
  return b;
}

struct BoundCheck {
  bool ok = true;
  long first_fail = 0;  // t of the first violation when !ok
  long checked_to = 0;
};

inline BoundCheck verify_bound(const std::vector<unsigned long long>& C, const BoundCurve& curve,
                               long from_t = 1) {
  BoundCheck r;
  long to = std::min<long>(static_cast<long>(C.size()), curve.max_t());
  r.checked_to = to;
  for (long t = from_t; t <= to; ++t) {
    if (to_bigint(C[static_cast<std::size_t>(t - 1)]) > curve.eval(t)) {
      r.ok = false;
      r.first_fail = t;
      return r;
    }
  }
  return r;
}

// ---- skew form ----------------------------------------------------------

// Bound C(t) by C_b(t) * (1 + c(1 + c^q t^q)) where C_b counts base atoms in
// the base coordinates' own dynamics refined by the thresholds the bundle
// reads from them, c = (prod of bundle coordinate atom counts) - 1 and
// q = |bundle|.
struct SkewBound {
  BaseBundleSplit split;
  NetworkSpec base_spec;
  std::vector<ExtraCut> cuts;
  std::vector<unsigned long long> base_C;
  BigInt c_bundle;
  unsigned q_bundle = 0;
  BoundCurve curve;
  bool base_complete = true;  // base run reached the horizon untruncated
};

inline SkewBound skew_bound(const NetworkSpec& sp, const BaseBundleSplit& split, long t_max,
                            TraceOptions opt = {}) {
  require_valid(sp);
  SkewBound out;
  out.split = split;
  out.base_spec = restrict_spec(sp, split.base);
  std::vector<int> pos(static_cast<std::size_t>(sp.d), -1);
  for (std::size_t k = 0; k < split.base.size(); ++k)
    pos[static_cast<std::size_t>(split.base[k])] = static_cast<int>(k);
  for (int i : split.base)
    for (int j : split.bundle)
      if (sp.K[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] > 0)
        out.cuts.push_back(ExtraCut{pos[static_cast<std::size_t>(i)],
                                    sp.T[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)],
                                    sp.s[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]});
  opt.t_max = t_max;
  opt.extra_cuts = out.cuts;
  auto trace = complexity_trace(out.base_spec, opt);
  out.base_C = trace.C;
  out.base_complete = trace.truncation == Truncation::none && trace.reached_t >= t_max;
  auto bp = base_partition(sp);
  BigInt prod = 1;
  for (int j : split.bundle) prod *= BigInt(bp.coords[static_cast<std::size_t>(j)].atoms.size());
  out.c_bundle = prod - 1;
  out.q_bundle = static_cast<unsigned>(split.bundle.size());
  out.curve.name = "skew-" + std::to_string(out.q_bundle);
  out.curve.terms = {{0u, 1 + out.c_bundle}, {out.q_bundle, ipow(out.c_bundle, out.q_bundle + 1)}};
  out.curve.base_counts = out.base_C;
  return out;
}

// least-squares slope of log C against log t over the tail of the run
inline double growth_rate(const std::vector<unsigned long long>& C) {
  std::size_t n = C.size();
  if (n < 4) return 0;
  std::size_t from = n / 2;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t m = 0;
  for (std::size_t k = from; k < n; ++k) {
    if (C[k] == 0) continue;
    double lx = std::log(static_cast<double>(k + 1));
    double ly = std::log(static_cast<double>(C[k]));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++m;
  }
  double den = m * sxx - sx * sx;
  if (den == 0) return 0;
  return (m * sxy - sx * sy) / den;
}

}  // namespace dtrn
