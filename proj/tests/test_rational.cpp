#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include <dtrn/rational.hpp>

using namespace dtrn;

TEST_CASE("parse_rational accepts fractions, integers, and decimals") {
  CHECK(parse_rational("3/4") == make_rational(3, 4));
  CHECK(parse_rational("-3/4") == make_rational(-3, 4));
  CHECK(parse_rational("6/8") == make_rational(3, 4));
  CHECK(parse_rational("7") == Rational(7));
  CHECK(parse_rational("0.93") == make_rational(93, 100));
  CHECK(parse_rational("0.5") == make_rational(1, 2));
  CHECK(parse_rational(".25") == make_rational(1, 4));
  CHECK(parse_rational("1e-3") == make_rational(1, 1000));
  CHECK(parse_rational("2.5e1") == Rational(25));
  CHECK(parse_rational("0.1") == make_rational(1, 10));
}

TEST_CASE("parse_rational rejects malformed input") {
  CHECK_THROWS_AS(parse_rational(""), ParseError);
  CHECK_THROWS_AS(parse_rational("1/0"), ParseError);
  CHECK_THROWS_AS(parse_rational("x"), ParseError);
  CHECK_THROWS_AS(parse_rational("1.2.3"), ParseError);
  CHECK_THROWS_AS(parse_rational("1/"), ParseError);
  CHECK_THROWS_AS(parse_rational("--1"), ParseError);
}

TEST_CASE("format_rational round trips through parse_rational") {
  for (long p = -7; p <= 7; ++p)
    for (long q = 1; q <= 9; ++q) {
      Rational r = make_rational(p, q);
      CHECK(parse_rational(format_rational(r)) == r);
    }
}

TEST_CASE("format_rational canonical form") {
  CHECK(format_rational(make_rational(1, 2)) == "1/2");
  CHECK(format_rational(Rational(3)) == "3");
  CHECK(format_rational(Rational(0)) == "0");
  CHECK(format_rational(make_rational(-2, 6)) == "-1/3");
}

TEST_CASE("to_double_nearest is exact on dyadics") {
  CHECK(to_double_nearest(make_rational(3, 4)) == 0.75);
  CHECK(to_double_nearest(make_rational(1, 1024)) == 0x1p-10);
  CHECK(to_double_nearest(Rational(0)) == 0.0);
  CHECK(to_double_nearest(make_rational(-5, 8)) == -0.625);
}

TEST_CASE("to_double_nearest picks the closest representable value") {
  // nearest rounding: no neighboring double is closer
  for (long p : {1L, 2L, 5L, 92L, 93L}) {
    for (long q : {3L, 7L, 100L, 999L}) {
      Rational r = make_rational(p, q);
      double d = to_double_nearest(r);
      Rational err = abs(r - Rational(d));
      double up = std::nextafter(d, 2.0);
      double dn = std::nextafter(d, -2.0);
      CHECK(err <= abs(r - Rational(up)));
      CHECK(err <= abs(r - Rational(dn)));
    }
  }
}

TEST_CASE("hash_value agrees on equal rationals") {
  CHECK(hash_value(make_rational(2, 4)) == hash_value(make_rational(1, 2)));
  CHECK(hash_value(make_rational(1, 3)) != hash_value(make_rational(2, 3)));
}

TEST_CASE("to_bigint widens unsigned 64 bit counters") {
  CHECK(to_bigint(0ULL) == 0);
  CHECK(to_bigint(1'000'000'007ULL) == 1'000'000'007);
}
