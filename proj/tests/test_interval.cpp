#include <catch2/catch_amalgamated.hpp>

#include <dtrn/interval.hpp>

using namespace dtrn;

namespace {

FlaggedInterval iv(long pl, long ql, long ph, long qh, bool lc, bool hc) {
  auto r = make_interval(make_rational(pl, ql), make_rational(ph, qh), lc, hc);
  REQUIRE(r.has_value());
  return *r;
}

}  // namespace

TEST_CASE("make_interval rejects empty sets") {
  CHECK_FALSE(make_interval(make_rational(1, 2), make_rational(1, 3)).has_value());
  CHECK_FALSE(make_interval(make_rational(1, 2), make_rational(1, 2), true, false).has_value());
  CHECK_FALSE(make_interval(make_rational(1, 2), make_rational(1, 2), false, true).has_value());
  CHECK(make_interval(make_rational(1, 2), make_rational(1, 2), true, true).has_value());
}

TEST_CASE("singleton detection") {
  CHECK(is_singleton(iv(1, 2, 1, 2, true, true)));
  CHECK_FALSE(is_singleton(iv(1, 3, 1, 2, true, true)));
}

TEST_CASE("containment respects end flags") {
  auto half_open = iv(0, 1, 1, 2, true, false);  // [0, 1/2)
  CHECK(interval_contains(half_open, Rational(0)));
  CHECK(interval_contains(half_open, make_rational(1, 4)));
  CHECK_FALSE(interval_contains(half_open, make_rational(1, 2)));

  auto open_lo = iv(1, 2, 1, 1, false, true);  // (1/2, 1]
  CHECK_FALSE(interval_contains(open_lo, make_rational(1, 2)));
  CHECK(interval_contains(open_lo, Rational(1)));
}

TEST_CASE("intersection keeps the tighter flag at shared endpoints") {
  auto a = iv(0, 1, 1, 2, true, true);    // [0, 1/2]
  auto b = iv(1, 2, 1, 1, false, true);   // (1/2, 1]
  CHECK_FALSE(interval_intersect(a, b).has_value());

  auto c = iv(1, 2, 1, 1, true, true);    // [1/2, 1]
  auto m = interval_intersect(a, c);
  REQUIRE(m.has_value());
  CHECK(is_singleton(*m));
  CHECK(m->lo == make_rational(1, 2));

  auto d = iv(1, 4, 3, 4, true, false);   // [1/4, 3/4)
  auto n = interval_intersect(a, d);
  REQUIRE(n.has_value());
  CHECK(n->lo == make_rational(1, 4));
  CHECK(n->hi == make_rational(1, 2));
  CHECK(n->lo_closed);
  CHECK(n->hi_closed);
}

TEST_CASE("overlap is symmetric and consistent with intersection") {
  std::vector<FlaggedInterval> samples = {
      iv(0, 1, 1, 2, true, false), iv(1, 2, 1, 1, true, true),  iv(1, 2, 1, 2, true, true),
      iv(1, 4, 3, 4, false, true), iv(0, 1, 1, 1, true, true),  iv(3, 4, 1, 1, false, false),
  };
  for (const auto& u : samples)
    for (const auto& v : samples) {
      bool o = interval_overlaps(u, v);
      CHECK(o == interval_overlaps(v, u));
      CHECK(o == interval_intersect(u, v).has_value());
    }
}

TEST_CASE("affine image scales endpoints and keeps flags") {
  auto u = iv(1, 4, 3, 4, true, false);  // [1/4, 3/4)
  auto img = interval_affine_image(u, make_rational(1, 2), make_rational(1, 8));
  CHECK(img.lo == make_rational(1, 4));
  CHECK(img.hi == make_rational(1, 2));
  CHECK(img.lo_closed);
  CHECK_FALSE(img.hi_closed);
  CHECK(interval_width(img) == make_rational(1, 2) * interval_width(u));
}

TEST_CASE("representative lies inside the interval") {
  std::vector<FlaggedInterval> samples = {
      iv(0, 1, 1, 2, true, false), iv(1, 2, 1, 1, false, false), iv(1, 3, 1, 3, true, true),
      iv(0, 1, 1, 1, false, true),
  };
  for (const auto& u : samples) CHECK(interval_contains(u, interval_representative(u)));
}

TEST_CASE("interval formatting shows flags") {
  CHECK(format_interval(iv(0, 1, 1, 2, true, false)) == "[0,1/2)");
  CHECK(format_interval(iv(1, 2, 1, 1, false, true)) == "(1/2,1]");
}
