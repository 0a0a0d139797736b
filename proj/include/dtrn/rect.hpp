#pragma once

// Axis-aligned products of flagged intervals.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "interval.hpp"

namespace dtrn {

template <class V>
struct BasicRect {
  std::vector<BasicInterval<V>> sides;

  std::size_t dim() const { return sides.size(); }
};

using Rect = BasicRect<Rational>;

template <class V, class Cmp>
std::optional<BasicRect<V>> rect_intersect(const BasicRect<V>& u, const BasicRect<V>& v, Cmp cmp) {
  if (u.dim() != v.dim()) throw std::invalid_argument("rect_intersect: dimension mismatch");
  BasicRect<V> r;
  r.sides.reserve(u.dim());
  for (std::size_t i = 0; i < u.dim(); ++i) {
    auto s = interval_intersect(u.sides[i], v.sides[i], cmp);
    if (!s) return std::nullopt;  // empty in one coordinate empties the product
    r.sides.push_back(std::move(*s));
  }
  return r;
}

inline std::optional<Rect> rect_intersect(const Rect& u, const Rect& v) {
  return rect_intersect(u, v, ExactCmp{});
}

template <class V, class Cmp>
bool rect_contains(const BasicRect<V>& r, const std::vector<V>& x, Cmp cmp) {
  if (r.dim() != x.size()) throw std::invalid_argument("rect_contains: dimension mismatch");
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!interval_contains(r.sides[i], x[i], cmp)) return false;
  return true;
}

inline bool rect_contains(const Rect& r, const std::vector<Rational>& x) {
  return rect_contains(r, x, ExactCmp{});
}

inline std::string format_rect(const Rect& r) {
  std::string s;
  for (std::size_t i = 0; i < r.dim(); ++i) {
    if (i) s += " x ";
    s += format_interval(r.sides[i]);
  }
  return s;
}

}  // namespace dtrn
