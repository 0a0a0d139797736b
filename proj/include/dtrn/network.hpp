#pragma once

// Network model: interaction weights K[i][j], thresholds T[i][j] and signs
// s[i][j] describe how unit i acts on unit j. The time step is
//
//   F(x)_j = a*x_j + (1-a) * ( sum_i K[i][j]*H(s[i][j]*(x_i - T[i][j])) + D_j )
//
// with H(y) = 0 iff y <= 0, so for s = +1 the branch switches strictly above
// the threshold and for s = -1 strictly below it. D is the optional
// non-autonomous per-step offset.

#include <climits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rational.hpp"

namespace dtrn {

enum class Mode { autonomous, sequence };
enum class OffsetRule { finite, periodic, constant };

struct OffsetSequence {
  OffsetRule rule = OffsetRule::constant;
  std::vector<std::vector<Rational>> vectors;  // each of size d

  // offsets for the step mapping generation t to t+1, 1-based t
  const std::vector<Rational>& at(long t) const {
    if (vectors.empty()) throw std::logic_error("empty offset sequence");
    switch (rule) {
      case OffsetRule::constant:
        return vectors.front();
      case OffsetRule::periodic:
        return vectors[static_cast<std::size_t>((t - 1) % static_cast<long>(vectors.size()))];
      case OffsetRule::finite:
        if (t < 1 || t > static_cast<long>(vectors.size()))
          throw std::out_of_range("offset sequence exhausted");
        return vectors[static_cast<std::size_t>(t - 1)];
    }
    throw std::logic_error("bad offset rule");
  }

  // number of steps the sequence can drive; LONG_MAX when unbounded
  long steps_available() const {
    return rule == OffsetRule::finite ? static_cast<long>(vectors.size()) : LONG_MAX;
  }
};

struct NetworkSpec {
  int d = 0;
  Mode mode = Mode::autonomous;
  Rational a;
  std::vector<std::vector<Rational>> K, T;  // d x d, row-major: [tail][head]
  std::vector<std::vector<int>> s;          // entries in {-1, 0, +1}
  std::optional<OffsetSequence> offsets;    // sequence mode only
};

struct Violation {
  std::string where, rule, message;
};

struct ValidationError : std::runtime_error {
  std::vector<Violation> violations;
  explicit ValidationError(std::vector<Violation> v)
      : std::runtime_error(v.empty() ? "validation failed"
                                     : "validation failed: " + v.front().message),
        violations(std::move(v)) {}
};

inline NetworkSpec make_spec(int d) {
  NetworkSpec sp;
  sp.d = d;
  sp.a = make_rational(1, 4);
  sp.K.assign(d, std::vector<Rational>(d, Rational(0)));
  sp.T.assign(d, std::vector<Rational>(d, Rational(0)));
  sp.s.assign(d, std::vector<int>(d, 0));
  return sp;
}

// Thresholds of absent arrows carry no meaning; pin them to 0 so equality of
// specs and serialization stay canonical.
inline NetworkSpec canonicalize_spec(NetworkSpec sp) {
  for (int i = 0; i < sp.d; ++i)
    for (int j = 0; j < sp.d; ++j)
      if (sp.K[i][j] == 0) sp.T[i][j] = 0;
  return sp;
}

inline std::vector<Violation> validate(const NetworkSpec& sp) {
  std::vector<Violation> out;
  auto flag = [&out](std::string where, std::string rule, std::string msg) {
    out.push_back({std::move(where), std::move(rule), std::move(msg)});
  };
  if (sp.d < 1) {
    flag("spec", "dimension", "dimension must be at least 1");
    return out;
  }
  auto shape_ok = [&](const auto& m) {
    if (static_cast<int>(m.size()) != sp.d) return false;
    for (const auto& row : m)
      if (static_cast<int>(row.size()) != sp.d) return false;
    return true;
  };
  if (!shape_ok(sp.K) || !shape_ok(sp.T) || !shape_ok(sp.s)) {
    flag("spec", "shape", "K, T, s must all be d x d");
    return out;
  }
  if (sp.a < 0 || sp.a >= 1) flag("a", "contraction-range", "a must lie in [0,1)");
  for (int i = 0; i < sp.d; ++i) {
    for (int j = 0; j < sp.d; ++j) {
      std::string cell = "(" + std::to_string(i) + "," + std::to_string(j) + ")";
      if (sp.K[i][j] < 0 || sp.K[i][j] > 1)
        flag(cell, "weight-range", "K" + cell + " outside [0,1]");
      if (sp.T[i][j] < 0 || sp.T[i][j] > 1)
        flag(cell, "threshold-range", "T" + cell + " outside [0,1]");
      if (sp.s[i][j] != -1 && sp.s[i][j] != 0 && sp.s[i][j] != 1)
        flag(cell, "sign-range", "s" + cell + " must be -1, 0 or +1");
      if ((sp.s[i][j] == 0) != (sp.K[i][j] == 0))
        flag(cell, "sign-support", "s" + cell + " must be nonzero exactly where K" + cell + " is");
    }
  }
  for (int j = 0; j < sp.d; ++j) {
    Rational col(0);
    for (int i = 0; i < sp.d; ++i) col += sp.K[i][j];
    std::string where = "column " + std::to_string(j);
    if (sp.mode == Mode::autonomous) {
      if (col != 1)
        flag(where, "column-sum", "autonomous column " + std::to_string(j) + " sums to " +
                                      format_rational(col) + ", expected 1");
    } else {
      if (col > 1)
        flag(where, "column-sum", "sequence-mode column " + std::to_string(j) + " sums to " +
                                      format_rational(col) + ", above 1");
    }
  }
  if (sp.mode == Mode::sequence && sp.offsets) {
    const auto& os = *sp.offsets;
    if (os.vectors.empty()) flag("offsets", "offsets-empty", "offset sequence has no vectors");
    std::vector<Rational> colsum(static_cast<std::size_t>(sp.d), Rational(0));
    for (int j = 0; j < sp.d; ++j)
      for (int i = 0; i < sp.d; ++i) colsum[static_cast<std::size_t>(j)] += sp.K[i][j];
    for (std::size_t k = 0; k < os.vectors.size(); ++k) {
      const auto& v = os.vectors[k];
      if (static_cast<int>(v.size()) != sp.d) {
        flag("offsets[" + std::to_string(k) + "]", "offset-shape", "offset vector has wrong size");
        continue;
      }
      for (int j = 0; j < sp.d; ++j) {
        const Rational& D = v[static_cast<std::size_t>(j)];
        if (D < 0 || D + colsum[static_cast<std::size_t>(j)] > 1)
          flag("offsets[" + std::to_string(k) + "][" + std::to_string(j) + "]", "offset-range",
               "offset must satisfy 0 <= D and D + column sum <= 1");
      }
    }
  }
  if (sp.mode == Mode::autonomous && sp.offsets)
    flag("offsets", "offsets-mode", "offsets are only meaningful in sequence mode");
  return out;
}

inline void require_valid(const NetworkSpec& sp) {
  auto v = validate(sp);
  if (!v.empty()) throw ValidationError(std::move(v));
}

// H(s*(x - T)) for one arrow; the boundary always takes the 0 branch.
inline int heaviside_term(int s, const Rational& x, const Rational& T) {
  if (s > 0) return x > T ? 1 : 0;
  if (s < 0) return x < T ? 1 : 0;
  return 0;
}

inline std::vector<Rational> evaluate_map(const NetworkSpec& sp, const std::vector<Rational>& x,
                                          const std::vector<Rational>* offset = nullptr) {
  if (static_cast<int>(x.size()) != sp.d)
    throw std::invalid_argument("evaluate_map: point has wrong dimension");
  std::vector<Rational> y(x.size());
  Rational one_minus_a = 1 - sp.a;
  for (int j = 0; j < sp.d; ++j) {
    Rational acc(0);
    for (int i = 0; i < sp.d; ++i) {
      if (sp.K[i][j] == 0) continue;
      if (heaviside_term(sp.s[i][j], x[static_cast<std::size_t>(i)], sp.T[i][j]))
        acc += sp.K[i][j];
    }
    if (offset) acc += (*offset)[static_cast<std::size_t>(j)];
    y[static_cast<std::size_t>(j)] = sp.a * x[static_cast<std::size_t>(j)] + one_minus_a * acc;
  }
  return y;
}

// Restriction to a vertex subset (kept order defines the new indexing).
// Dropped in-arrows lower column sums, so the result is built in sequence mode
// unless every kept column keeps full weight.
inline NetworkSpec restrict_spec(const NetworkSpec& sp, const std::vector<int>& keep) {
  int nd = static_cast<int>(keep.size());
  NetworkSpec r = make_spec(nd);
  r.a = sp.a;
  bool full = true;
  for (int jj = 0; jj < nd; ++jj) {
    Rational col(0), fullcol(0);
    for (int i = 0; i < sp.d; ++i) fullcol += sp.K[i][keep[static_cast<std::size_t>(jj)]];
    for (int ii = 0; ii < nd; ++ii) {
      int i = keep[static_cast<std::size_t>(ii)], j = keep[static_cast<std::size_t>(jj)];
      r.K[ii][jj] = sp.K[i][j];
      r.T[ii][jj] = sp.T[i][j];
      r.s[ii][jj] = sp.s[i][j];
      col += sp.K[i][j];
    }
    if (col != fullcol || (sp.mode == Mode::autonomous && col != 1)) full = false;
  }
  r.mode = full && sp.mode == Mode::autonomous ? Mode::autonomous : Mode::sequence;
  return canonicalize_spec(std::move(r));
}

}  // namespace dtrn
