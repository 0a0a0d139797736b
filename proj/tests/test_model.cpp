#include <catch2/catch_amalgamated.hpp>

#include <dtrn/network.hpp>
#include <dtrn/presets.hpp>

using namespace dtrn;

namespace {

bool has_rule(const std::vector<Violation>& v, const std::string& rule) {
  for (const auto& e : v)
    if (e.rule == rule) return true;
  return false;
}

}  // namespace

TEST_CASE("presets validate cleanly") {
  for (const auto& entry : preset_table()) {
    auto sp = build_preset(entry.name);
    CAPTURE(entry.name);
    CHECK(validate(sp).empty());
  }
}

TEST_CASE("validate flags out-of-range fields") {
  auto sp = self_inhibitor();
  sp.a = Rational(1);
  CHECK(has_rule(validate(sp), "contraction-range"));

  sp = self_inhibitor();
  sp.K[0][0] = make_rational(3, 2);
  CHECK(has_rule(validate(sp), "weight-range"));

  sp = self_inhibitor();
  sp.T[0][0] = make_rational(-1, 2);
  CHECK(has_rule(validate(sp), "threshold-range"));

  sp = self_inhibitor();
  sp.s[0][0] = 2;
  CHECK(has_rule(validate(sp), "sign-range"));

  sp = self_inhibitor();
  sp.s[0][0] = 0;  // weight present but sign absent
  CHECK(has_rule(validate(sp), "sign-support"));
}

TEST_CASE("autonomous columns must sum to one") {
  auto sp = toggle_switch();
  sp.K[0][1] = make_rational(1, 2);
  CHECK(has_rule(validate(sp), "column-sum"));
  sp.mode = Mode::sequence;  // partial weight is fine when offsets can fill the gap
  CHECK(validate(sp).empty());
  sp.K[0][1] = make_rational(5, 4);
  CHECK(has_rule(validate(sp), "weight-range"));
}

TEST_CASE("sequence offsets are range checked") {
  auto sp = self_inhibitor();
  sp.mode = Mode::sequence;
  sp.K[0][0] = make_rational(1, 2);
  OffsetSequence os;
  os.rule = OffsetRule::finite;
  os.vectors = {{make_rational(1, 4)}, {make_rational(3, 4)}};
  sp.offsets = os;
  CHECK(has_rule(validate(sp), "offset-range"));  // 3/4 + 1/2 > 1
  sp.offsets->vectors[1][0] = make_rational(1, 2);
  CHECK(validate(sp).empty());

  sp.mode = Mode::autonomous;
  sp.K[0][0] = Rational(1);
  CHECK(has_rule(validate(sp), "offsets-mode"));
}

TEST_CASE("offset sequence indexing by rule") {
  OffsetSequence os;
  os.vectors = {{Rational(0)}, {make_rational(1, 4)}, {make_rational(1, 2)}};
  os.rule = OffsetRule::finite;
  CHECK(os.at(2)[0] == make_rational(1, 4));
  CHECK(os.steps_available() == 3);
  CHECK_THROWS_AS(os.at(4), std::out_of_range);
  os.rule = OffsetRule::periodic;
  CHECK(os.at(4)[0] == Rational(0));
  os.rule = OffsetRule::constant;
  CHECK(os.at(100)[0] == Rational(0));
}

TEST_CASE("heaviside boundary takes the zero branch") {
  Rational T = make_rational(1, 2);
  CHECK(heaviside_term(+1, make_rational(1, 2), T) == 0);
  CHECK(heaviside_term(+1, make_rational(3, 4), T) == 1);
  CHECK(heaviside_term(-1, make_rational(1, 2), T) == 0);
  CHECK(heaviside_term(-1, make_rational(1, 4), T) == 1);
  CHECK(heaviside_term(0, Rational(0), T) == 0);
}

TEST_CASE("one step of the self inhibitor") {
  // x' = a x + (1-a) H(T - x); a = 1/4, T = 1/2
  auto sp = self_inhibitor();
  auto y = evaluate_map(sp, {Rational(0)});
  CHECK(y[0] == make_rational(3, 4));  // below threshold, production on
  y = evaluate_map(sp, y);
  CHECK(y[0] == make_rational(3, 16));  // above threshold, decay only
  y = evaluate_map(sp, y);
  CHECK(y[0] == make_rational(51, 64));
}

TEST_CASE("restrict_spec keeps full-weight subnetworks autonomous") {
  auto sp = p53_core();
  auto base = restrict_spec(sp, {0, 1});
  CHECK(base.mode == Mode::autonomous);
  CHECK(base.d == 2);
  CHECK(base.K[0][1] == Rational(1));
  CHECK(base.K[1][0] == Rational(1));
  CHECK(validate(base).empty());

  // dropping an in-arrow leaves a deficit, so the result is sequence mode
  auto part = restrict_spec(sp, {2, 3});
  CHECK(part.mode == Mode::sequence);
  CHECK(validate(part).empty());
}

TEST_CASE("canonicalize zeroes thresholds on absent arrows") {
  auto sp = make_spec(2);
  sp.a = make_rational(1, 4);
  sp.K = {{Rational(0), Rational(1)}, {Rational(1), Rational(0)}};
  sp.T = {{make_rational(9, 10), make_rational(1, 2)},
          {make_rational(1, 2), make_rational(9, 10)}};
  sp.s = {{0, 1}, {-1, 0}};
  auto c = canonicalize_spec(sp);
  CHECK(c.T[0][0] == Rational(0));
  CHECK(c.T[1][1] == Rational(0));
  CHECK(c.T[0][1] == make_rational(1, 2));
}
