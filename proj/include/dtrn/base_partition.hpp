#pragma once

// The base partition: per coordinate i, [0,1] splits into signature-constant
// semiclosed intervals at the thresholds T[i][j] of the arrows leaving i.
// A +1 arrow cuts [0,T] | (T,1], a -1 arrow cuts [0,T) | [T,1]; coincident
// thresholds of opposite sign leave a singleton {T}. Thresholds at 0 or 1 are
// kept; they contribute at most a boundary singleton. The product over
// coordinates is the partition the engine refines.

#include <algorithm>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "interval.hpp"
#include "network.hpp"

namespace dtrn {

struct BaseAtom1D {
  FlaggedInterval iv;
  std::uint32_t sig = 0;  // bit k: Heaviside value for the k-th out-arrow of this coordinate
};

// Extra cuts refine a coordinate without adding dynamics; the skew-product
// bound runs the base subsystem against the full network's partition this way.
struct ExtraCut {
  int coord = 0;
  Rational T;
  int s = 0;
};

struct CoordPartition {
  int i = 0;
  std::vector<int> out_js;            // heads j with K[i][j] > 0, ascending
  std::vector<Rational> thresholds;   // T[i][out_js[k]]
  std::vector<int> signs;             // s[i][out_js[k]]
  std::vector<BaseAtom1D> atoms;      // ascending, partition [0,1]
};

struct BasePartition {
  std::vector<CoordPartition> coords;
  BigInt total;                             // #P = product of per-coordinate counts
  std::vector<unsigned long long> strides;  // flat index strides, last coordinate fastest
  bool total_fits = false;                  // #P fits unsigned long long
  unsigned long long total_ull = 0;

  unsigned long long flat_index(const std::vector<std::uint32_t>& idx) const {
    unsigned long long f = 0;
    for (std::size_t i = 0; i < idx.size(); ++i) f += idx[i] * strides[i];
    return f;
  }
  std::vector<std::uint32_t> unflatten(unsigned long long f) const {
    std::vector<std::uint32_t> idx(coords.size());
    for (std::size_t i = 0; i < coords.size(); ++i) {
      idx[i] = static_cast<std::uint32_t>(f / strides[i]);
      f %= strides[i];
    }
    return idx;
  }
};

inline BasePartition base_partition(const NetworkSpec& sp, const std::vector<ExtraCut>& extra = {}) {
  BasePartition bp;
  bp.coords.resize(static_cast<std::size_t>(sp.d));
  for (int i = 0; i < sp.d; ++i) {
    auto& cp = bp.coords[static_cast<std::size_t>(i)];
    cp.i = i;
    // cut events: position -> (cuts closed-left, cuts open-left)
    std::map<Rational, std::pair<bool, bool>> events;
    for (int j = 0; j < sp.d; ++j) {
      if (sp.K[i][j] == 0) continue;
      cp.out_js.push_back(j);
      cp.thresholds.push_back(sp.T[i][j]);
      cp.signs.push_back(sp.s[i][j]);
      auto& e = events[sp.T[i][j]];
      (sp.s[i][j] > 0 ? e.first : e.second) = true;
    }
    for (const auto& c : extra) {
      if (c.coord != i) continue;
      auto& e = events[c.T];
      (c.s > 0 ? e.first : e.second) = true;
    }
    if (cp.out_js.size() > 32)
      throw std::invalid_argument("base_partition: more than 32 out-arrows on one coordinate");
    Rational cur(0);
    bool cur_closed = true;
    auto emit = [&cp](Rational lo, Rational hi, bool lc, bool hc) {
      if (auto iv = make_interval(std::move(lo), std::move(hi), lc, hc))
        cp.atoms.push_back({*iv, 0});
    };
    for (const auto& [T, e] : events) {
      auto [plus, minus] = e;
      if (plus && minus) {
        emit(cur, T, cur_closed, false);
        emit(T, T, true, true);
        cur = T;
        cur_closed = false;
      } else if (plus) {
        emit(cur, T, cur_closed, true);
        cur = T;
        cur_closed = false;
      } else {
        emit(cur, T, cur_closed, false);
        cur = T;
        cur_closed = true;
      }
    }
    emit(cur, Rational(1), cur_closed, true);
    // signatures: the Heaviside value is constant on each atom
    for (auto& atom : cp.atoms) {
      for (std::size_t k = 0; k < cp.thresholds.size(); ++k) {
        const Rational& T = cp.thresholds[k];
        bool one;
        if (cp.signs[k] > 0)
          one = atom.iv.lo > T || (atom.iv.lo == T && !atom.iv.lo_closed);
        else
          one = atom.iv.hi < T || (atom.iv.hi == T && !atom.iv.hi_closed);
        if (one) atom.sig |= 1u << k;
      }
    }
  }
  bp.total = 1;
  for (const auto& cp : bp.coords) bp.total *= static_cast<unsigned long>(cp.atoms.size());
  bp.total_fits = bp.total.fits_ulong_p() || mpz_sizeinbase(bp.total.get_mpz_t(), 2) <= 63;
  if (bp.total_fits) bp.total_ull = static_cast<unsigned long long>(bp.total.get_ui());
  bp.strides.assign(bp.coords.size(), 1);
  if (bp.total_fits) {
    for (std::size_t i = bp.coords.size(); i-- > 1;)
      bp.strides[i - 1] = bp.strides[i] * bp.coords[i].atoms.size();
  }
  return bp;
}

// index of the atom of coordinate cp containing x; atoms partition [0,1]
inline std::uint32_t classify_coord(const CoordPartition& cp, const Rational& x) {
  std::size_t lo = 0, hi = cp.atoms.size();
  while (hi - lo > 1) {
    std::size_t mid = (lo + hi) / 2;
    const auto& iv = cp.atoms[mid].iv;
    if (x > iv.lo || (x == iv.lo && iv.lo_closed))
      lo = mid;
    else
      hi = mid;
  }
  if (!interval_contains(cp.atoms[lo].iv, x))
    throw std::logic_error("classify_coord: point escaped the unit interval partition");
  return static_cast<std::uint32_t>(lo);
}

inline std::vector<std::uint32_t> classify_point(const BasePartition& bp,
                                                 const std::vector<Rational>& x) {
  std::vector<std::uint32_t> idx(bp.coords.size());
  for (std::size_t i = 0; i < bp.coords.size(); ++i) idx[i] = classify_coord(bp.coords[i], x[i]);
  return idx;
}

}  // namespace dtrn
