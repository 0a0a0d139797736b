#pragma once

// Semiclosed interval algebra with explicit endpoint flags. Singletons are
// first-class ([x,x] with both ends closed); the empty set is not representable,
// operations that can produce it return std::nullopt instead.
//
// Everything is generic over the scalar and a three-way comparator so the same
// boundary logic drives exact rationals, the engine's scaled integers, and the
// binary64 mode.

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

#include "rational.hpp"

namespace dtrn {

template <class V>
struct BasicInterval {
  V lo{}, hi{};
  bool lo_closed = true, hi_closed = true;
};

using FlaggedInterval = BasicInterval<Rational>;

struct ExactCmp {
  template <class V>
  int operator()(const V& a, const V& b) const {
    return a < b ? -1 : (b < a ? 1 : 0);
  }
  int operator()(const Rational& a, const Rational& b) const { return cmp(a, b); }
};

// valid nonempty interval: lo < hi, or lo == hi with both ends closed
template <class V, class Cmp>
bool interval_valid(const BasicInterval<V>& iv, Cmp cmp) {
  int c = cmp(iv.lo, iv.hi);
  if (c < 0) return true;
  return c == 0 && iv.lo_closed && iv.hi_closed;
}

template <class V, class Cmp>
std::optional<BasicInterval<V>> make_interval(V lo, V hi, bool lo_closed, bool hi_closed, Cmp cmp) {
  BasicInterval<V> iv{std::move(lo), std::move(hi), lo_closed, hi_closed};
  if (!interval_valid(iv, cmp)) return std::nullopt;
  return iv;
}

inline std::optional<FlaggedInterval> make_interval(Rational lo, Rational hi, bool lo_closed = true,
                                                    bool hi_closed = true) {
  return make_interval(std::move(lo), std::move(hi), lo_closed, hi_closed, ExactCmp{});
}

template <class V, class Cmp>
bool is_singleton(const BasicInterval<V>& iv, Cmp cmp) {
  return cmp(iv.lo, iv.hi) == 0;
}

inline bool is_singleton(const FlaggedInterval& iv) { return is_singleton(iv, ExactCmp{}); }

template <class V, class Cmp>
bool interval_contains(const BasicInterval<V>& iv, const V& x, Cmp cmp) {
  int cl = cmp(x, iv.lo);
  if (cl < 0 || (cl == 0 && !iv.lo_closed)) return false;
  int ch = cmp(x, iv.hi);
  if (ch > 0 || (ch == 0 && !iv.hi_closed)) return false;
  return true;
}

inline bool interval_contains(const FlaggedInterval& iv, const Rational& x) {
  return interval_contains(iv, x, ExactCmp{});
}

template <class V, class Cmp>
std::optional<BasicInterval<V>> interval_intersect(const BasicInterval<V>& u, const BasicInterval<V>& v,
                                                   Cmp cmp) {
  BasicInterval<V> r;
  int cl = cmp(u.lo, v.lo);
  if (cl > 0) {
    r.lo = u.lo;
    r.lo_closed = u.lo_closed;
  } else if (cl < 0) {
    r.lo = v.lo;
    r.lo_closed = v.lo_closed;
  } else {
    r.lo = u.lo;
    r.lo_closed = u.lo_closed && v.lo_closed;
  }
  int ch = cmp(u.hi, v.hi);
  if (ch < 0) {
    r.hi = u.hi;
    r.hi_closed = u.hi_closed;
  } else if (ch > 0) {
    r.hi = v.hi;
    r.hi_closed = v.hi_closed;
  } else {
    r.hi = u.hi;
    r.hi_closed = u.hi_closed && v.hi_closed;
  }
  if (!interval_valid(r, cmp)) return std::nullopt;
  return r;
}

inline std::optional<FlaggedInterval> interval_intersect(const FlaggedInterval& u,
                                                         const FlaggedInterval& v) {
  return interval_intersect(u, v, ExactCmp{});
}

// two intervals touch or overlap (used by the disjointness assertions)
template <class V, class Cmp>
bool interval_overlaps(const BasicInterval<V>& u, const BasicInterval<V>& v, Cmp cmp) {
  return interval_intersect(u, v, cmp).has_value();
}

inline bool interval_overlaps(const FlaggedInterval& u, const FlaggedInterval& v) {
  return interval_overlaps(u, v, ExactCmp{});
}

template <class V, class Cmp>
bool interval_equal(const BasicInterval<V>& u, const BasicInterval<V>& v, Cmp cmp) {
  return cmp(u.lo, v.lo) == 0 && cmp(u.hi, v.hi) == 0 && u.lo_closed == v.lo_closed &&
         u.hi_closed == v.hi_closed;
}

inline bool interval_equal(const FlaggedInterval& u, const FlaggedInterval& v) {
  return interval_equal(u, v, ExactCmp{});
}

// x -> a*x + b with 0 < a < 1; orientation-preserving, so flags carry over.
inline FlaggedInterval interval_affine_image(const FlaggedInterval& iv, const Rational& a,
                                             const Rational& b) {
  if (!(a > 0) || !(a < 1))
    throw std::invalid_argument("affine image requires a strict contraction factor in (0,1)");
  return FlaggedInterval{a * iv.lo + b, a * iv.hi + b, iv.lo_closed, iv.hi_closed};
}

inline Rational interval_width(const FlaggedInterval& iv) { return iv.hi - iv.lo; }

inline std::string format_interval(const FlaggedInterval& iv) {
  std::string s;
  s += iv.lo_closed ? '[' : '(';
  s += format_rational(iv.lo);
  s += ',';
  s += format_rational(iv.hi);
  s += iv.hi_closed ? ']' : ')';
  return s;
}

// interior sample point; for singletons the point itself
inline Rational interval_representative(const FlaggedInterval& iv) {
  if (is_singleton(iv)) return iv.lo;
  return (iv.lo + iv.hi) / 2;
}

}  // namespace dtrn
