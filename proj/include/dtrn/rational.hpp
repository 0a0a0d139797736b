#pragma once

// Exact rational scalar used throughout: GMP-backed, always reduced, den > 0.

#include <gmpxx.h>

#include <cctype>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace dtrn {

using Rational = mpq_class;
using BigInt = mpz_class;

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline Rational make_rational(long num, long den) {
  if (den == 0) throw ParseError("rational with zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

// gmpxx has no unsigned long long constructor; unsigned long is wide enough here
inline BigInt to_bigint(unsigned long long v) { return BigInt(static_cast<unsigned long>(v)); }

namespace detail {

inline bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

// "123.456" with optional exponent, converted via its decimal expansion.
inline Rational parse_decimal(std::string_view s) {
  long exp10 = 0;
  auto epos = s.find_first_of("eE");
  if (epos != std::string_view::npos) {
    std::string_view es = s.substr(epos + 1);
    bool eneg = false;
    if (!es.empty() && (es[0] == '+' || es[0] == '-')) {
      eneg = es[0] == '-';
      es.remove_prefix(1);
    }
    if (!all_digits(es) || es.size() > 6) throw ParseError("bad exponent in rational literal");
    for (char c : es) exp10 = exp10 * 10 + (c - '0');
    if (eneg) exp10 = -exp10;
    s = s.substr(0, epos);
  }
  std::string digits;
  long frac_digits = 0;
  auto dot = s.find('.');
  if (dot == std::string_view::npos) {
    if (!all_digits(s)) throw ParseError("bad rational literal");
    digits = std::string(s);
  } else {
    std::string_view ip = s.substr(0, dot), fp = s.substr(dot + 1);
    if (ip.empty() && fp.empty()) throw ParseError("bad rational literal");
    if (!ip.empty() && !all_digits(ip)) throw ParseError("bad rational literal");
    if (!fp.empty() && !all_digits(fp)) throw ParseError("bad rational literal");
    digits = std::string(ip) + std::string(fp);
    frac_digits = static_cast<long>(fp.size());
  }
  if (digits.empty()) throw ParseError("bad rational literal");
  BigInt num(digits, 10);
  long shift = exp10 - frac_digits;
  Rational r(num);
  if (shift > 0) {
    BigInt p;
    mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(shift));
    r *= Rational(p);
  } else if (shift < 0) {
    BigInt p;
    mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(-shift));
    r /= Rational(p);
  }
  r.canonicalize();
  return r;
}

}  // namespace detail

// Accepts "p/q", integer, or decimal ("0.93" -> 93/100) literals, optional sign.
inline Rational parse_rational(std::string_view in) {
  std::string_view s = in;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  if (s.empty()) throw ParseError("empty rational literal");
  bool neg = false;
  if (s[0] == '+' || s[0] == '-') {
    neg = s[0] == '-';
    s.remove_prefix(1);
  }
  if (s.empty()) throw ParseError("bad rational literal: '" + std::string(in) + "'");
  Rational r;
  auto slash = s.find('/');
  if (slash != std::string_view::npos) {
    std::string_view ns = s.substr(0, slash), ds = s.substr(slash + 1);
    if (!detail::all_digits(ns) || !detail::all_digits(ds))
      throw ParseError("bad rational literal: '" + std::string(in) + "'");
    BigInt num(std::string(ns), 10), den(std::string(ds), 10);
    if (den == 0) throw ParseError("rational with zero denominator: '" + std::string(in) + "'");
    r = Rational(num) / Rational(den);
    r.canonicalize();
  } else {
    try {
      r = detail::parse_decimal(s);
    } catch (const ParseError&) {
      throw ParseError("bad rational literal: '" + std::string(in) + "'");
    }
  }
  if (neg) r = -r;
  return r;
}

inline std::string format_rational(const Rational& r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

// Nearest binary64 (round half to even). mpq_get_d truncates, so do it by hand:
// form a 54-bit quotient of num/den, then round on the guard bit and the sticky
// remainder. Values far outside double range clamp to +/-inf or 0.
inline double to_double_nearest(const Rational& r) {
  int s = sgn(r);
  if (s == 0) return 0.0;
  BigInt n = abs(r.get_num());
  const BigInt& d = r.get_den();
  long nb = static_cast<long>(mpz_sizeinbase(n.get_mpz_t(), 2));
  long db = static_cast<long>(mpz_sizeinbase(d.get_mpz_t(), 2));
  // shift so that floor(n*2^shift / d) has 54 or 55 bits
  long shift = 54 - (nb - db);
  BigInt N = n, D = d;
  if (shift > 0)
    mpz_mul_2exp(N.get_mpz_t(), N.get_mpz_t(), static_cast<unsigned long>(shift));
  else if (shift < 0)
    mpz_mul_2exp(D.get_mpz_t(), D.get_mpz_t(), static_cast<unsigned long>(-shift));
  BigInt q, rem;
  mpz_tdiv_qr(q.get_mpz_t(), rem.get_mpz_t(), N.get_mpz_t(), D.get_mpz_t());
  long qb = static_cast<long>(mpz_sizeinbase(q.get_mpz_t(), 2));
  long excess = qb - 53;  // 1 or 2
  long e2 = -shift;       // value = q * 2^e2
  if (excess > 0) {
    BigInt low;
    mpz_fdiv_r_2exp(low.get_mpz_t(), q.get_mpz_t(), static_cast<unsigned long>(excess));
    mpz_fdiv_q_2exp(q.get_mpz_t(), q.get_mpz_t(), static_cast<unsigned long>(excess));
    BigInt half;
    mpz_ui_pow_ui(half.get_mpz_t(), 2, static_cast<unsigned long>(excess - 1));
    int c = cmp(low, half);
    bool sticky = rem != 0;
    if (c > 0 || (c == 0 && (sticky || mpz_odd_p(q.get_mpz_t()))))
      q += 1;
    e2 += excess;
  }
  double mant = q.get_d();  // q < 2^54, exact
  if (e2 > 2000) return s > 0 ? HUGE_VAL : -HUGE_VAL;
  if (e2 < -2000) return s > 0 ? 0.0 : -0.0;
  double v = std::ldexp(mant, static_cast<int>(e2));
  return s > 0 ? v : -v;
}

// FNV-style hash over the canonical limbs; suitable for unordered containers.
inline std::uint64_t hash_value(const Rational& r) {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](std::uint64_t x) {
    h ^= x;
    h *= 1099511628211ull;
  };
  auto feed = [&](const mpz_class& z) {
    mix(static_cast<std::uint64_t>(mpz_sgn(z.get_mpz_t()) + 1));
    std::size_t limbs = mpz_size(z.get_mpz_t());
    mix(limbs);
    for (std::size_t i = 0; i < limbs; ++i)
      mix(static_cast<std::uint64_t>(mpz_getlimbn(z.get_mpz_t(), i)));
  };
  feed(r.get_num());
  feed(r.get_den());
  return h;
}

struct RationalHash {
  std::size_t operator()(const Rational& r) const { return static_cast<std::size_t>(hash_value(r)); }
};

}  // namespace dtrn
