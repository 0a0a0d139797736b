#pragma once

// Ready-made networks used throughout the tests and the command line tool.

#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "network.hpp"

namespace dtrn {

// single gene repressing itself: F(x) = a x + (1-a) H(T - x)
inline NetworkSpec self_inhibitor(const Rational& a = make_rational(1, 4),
                                  const Rational& T = make_rational(1, 2)) {
  auto sp = make_spec(1);
  sp.a = a;
  sp.K[0][0] = 1;
  sp.T[0][0] = T;
  sp.s[0][0] = -1;
  return canonicalize_spec(sp);
}

// cyclic network 0 -> 1 -> ... -> d-1 -> 0 with the given interaction signs
inline NetworkSpec circuit(int d, const std::vector<int>& signs,
                           const Rational& a = make_rational(1, 4),
                           const std::vector<Rational>& thresholds = {}) {
  if (d < 1 || static_cast<int>(signs.size()) != d)
    throw std::invalid_argument("circuit: need one sign per arrow");
  if (!thresholds.empty() && static_cast<int>(thresholds.size()) != d)
    throw std::invalid_argument("circuit: need one threshold per arrow");
  auto sp = make_spec(d);
  sp.a = a;
  for (int i = 0; i < d; ++i) {
    std::size_t ii = static_cast<std::size_t>(i);
    std::size_t jj = static_cast<std::size_t>((i + 1) % d);
    sp.K[ii][jj] = 1;
    sp.T[ii][jj] = thresholds.empty() ? make_rational(1, 2) : thresholds[ii];
    sp.s[ii][jj] = signs[ii];
  }
  return canonicalize_spec(sp);
}

// mutual repression, the bistable switch
inline NetworkSpec toggle_switch(const Rational& a = make_rational(1, 4),
                                 const Rational& T01 = make_rational(1, 2),
                                 const Rational& T10 = make_rational(1, 2)) {
  return circuit(2, {-1, -1}, a, {T01, T10});
}

// one activation, one repression: the oscillating 2-circuit
inline NetworkSpec negative_2_circuit(const Rational& a = make_rational(1, 4),
                                      const Rational& T01 = make_rational(1, 2),
                                      const Rational& T10 = make_rational(1, 2)) {
  return circuit(2, {+1, -1}, a, {T01, T10});
}

inline NetworkSpec repressilator(const Rational& a = make_rational(1, 4),
                                 const std::vector<Rational>& thresholds = {}) {
  return circuit(3, {-1, -1, -1}, a, thresholds);
}

// n independent negative 2-circuits side by side on 2n coordinates; every
// second vertex is an isolated end, so n coordinates can be certified away
inline NetworkSpec disjoint_negative_2_circuits(int n, const Rational& a = make_rational(1, 4)) {
  if (n < 1) throw std::invalid_argument("disjoint_negative_2_circuits: n >= 1");
  auto sp = make_spec(2 * n);
  sp.a = a;
  for (int k = 0; k < n; ++k) {
    std::size_t u = static_cast<std::size_t>(2 * k), v = u + 1;
    sp.K[u][v] = 1;
    sp.T[u][v] = make_rational(1, 2);
    sp.s[u][v] = +1;
    sp.K[v][u] = 1;
    sp.T[v][u] = make_rational(1, 2);
    sp.s[v][u] = -1;
  }
  return canonicalize_spec(sp);
}

// four-component p53 core: p53 and mdm2 in a negative loop, p53 repressing a
// positive pair downstream. Coordinates: 0 p53, 1 mdm2, 2 and 3 the pair.
// Downstream columns read two sources with equal weight, which keeps the
// branch sums apart until a = 1/3.
inline NetworkSpec p53_core(const Rational& a = make_rational(1, 4)) {
  auto sp = make_spec(4);
  sp.a = a;
  Rational half = make_rational(1, 2);
  auto arrow = [&sp](int i, int j, int sign, const Rational& w, const Rational& T) {
    sp.K[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = w;
    sp.T[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = T;
    sp.s[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = sign;
  };
  arrow(0, 1, +1, 1, half);     // p53 activates mdm2
  arrow(1, 0, -1, 1, half);     // mdm2 degrades p53
  arrow(0, 2, -1, half, half);  // p53 represses both pair members
  arrow(0, 3, -1, half, half);
  arrow(2, 3, +1, half, half);  // the pair activates itself
  arrow(3, 2, +1, half, half);
  return canonicalize_spec(sp);
}

struct PresetEntry {
  std::string name;
  std::string summary;
  std::function<NetworkSpec(const Rational& a)> build;
};

inline const std::vector<PresetEntry>& preset_table() {
  static const std::vector<PresetEntry> table = {
      {"self-inhibitor", "one gene repressing itself",
       [](const Rational& a) { return self_inhibitor(a); }},
      {"toggle-switch", "two genes repressing each other",
       [](const Rational& a) { return toggle_switch(a); }},
      {"negative-2-circuit", "activation against repression",
       [](const Rational& a) { return negative_2_circuit(a); }},
      {"repressilator", "three-gene repression cycle",
       [](const Rational& a) { return repressilator(a); }},
      {"three-negative-2-circuits", "three independent oscillating pairs",
       [](const Rational& a) { return disjoint_negative_2_circuits(3, a); }},
      {"p53-core", "p53/mdm2 loop driving a positive pair",
       [](const Rational& a) { return p53_core(a); }},
  };
  return table;
}

inline NetworkSpec build_preset(const std::string& name, const Rational& a = make_rational(1, 4)) {
  for (const auto& e : preset_table())
    if (e.name == name) return e.build(a);
  std::string names;
  for (const auto& e : preset_table()) {
    if (!names.empty()) names += ", ";
    names += e.name;
  }
  throw ParseError("unknown preset " + name + " (have: " + names + ")");
}

}  // namespace dtrn
