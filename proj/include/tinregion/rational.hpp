#pragma once

#include <gmpxx.h>

#include <cctype>
#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>

namespace tin {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed input documents or values.
struct ParseError : Error {
  using Error::Error;
};

// An operation was called outside its domain.
struct PreconditionError : Error {
  using Error::Error;
};

// A size guard of an exhaustive routine was exceeded.
struct GuardExceeded : Error {
  using Error::Error;
};

using Rational = mpq_class;

inline constexpr double kDefaultPrecision = 1e-9;

inline double to_double(const Rational& q) { return q.get_d(); }

inline std::string to_string(const Rational& q) { return q.get_str(); }

// First continued-fraction convergent of x within tol.
inline Rational rationalize(double x, double tol = kDefaultPrecision) {
  if (!std::isfinite(x)) throw ParseError("non-finite value cannot be rationalized");
  if (!(tol > 0)) throw PreconditionError("rationalization precision must be positive");
  const Rational target(x);
  const Rational eps(tol);
  Rational z = target;
  mpz_class h_prev = 1, h_prev2 = 0;
  mpz_class k_prev = 0, k_prev2 = 1;
  for (int iter = 0; iter < 128; ++iter) {
    mpz_class a;
    mpz_fdiv_q(a.get_mpz_t(), z.get_num_mpz_t(), z.get_den_mpz_t());
    mpz_class h = a * h_prev + h_prev2;
    mpz_class k = a * k_prev + k_prev2;
    Rational approx(h, k);
    approx.canonicalize();
    Rational err = approx - target;
    if (abs(err) <= eps) return approx;
    Rational rest = z - Rational(a);
    if (rest == 0) return approx;
    z = 1 / rest;
    h_prev2 = h_prev;
    h_prev = h;
    k_prev2 = k_prev;
    k_prev = k;
  }
  return target;
}

// Accepts "p/q", integers and decimals with an optional exponent ("1.25e-2").
inline Rational parse_rational(std::string_view text) {
  auto fail = [&]() -> Rational {
    throw ParseError("not a rational literal: '" + std::string(text) + "'");
  };
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  if (s.empty()) return fail();

  if (auto slash = s.find('/'); slash != std::string::npos) {
    Rational q;
    mpz_class num, den;
    if (num.set_str(s.substr(0, slash), 10) != 0 || den.set_str(s.substr(slash + 1), 10) != 0)
      return fail();
    if (den == 0) throw ParseError("zero denominator in '" + s + "'");
    q = Rational(num, den);
    q.canonicalize();
    return q;
  }

  std::size_t pos = 0;
  bool negative = false;
  if (s[pos] == '+' || s[pos] == '-') negative = s[pos++] == '-';
  std::string digits;
  long exponent = 0;
  bool seen_digit = false, seen_point = false;
  for (; pos < s.size(); ++pos) {
    char c = s[pos];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits.push_back(c);
      seen_digit = true;
      if (seen_point) --exponent;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else {
      break;
    }
  }
  if (!seen_digit) return fail();
  if (pos < s.size()) {
    if (s[pos] != 'e' && s[pos] != 'E') return fail();
    std::string exp_text = s.substr(pos + 1);
    if (exp_text.empty()) return fail();
    std::size_t used = 0;
    long e = 0;
    try {
      e = std::stol(exp_text, &used);
    } catch (const std::exception&) {
      return fail();
    }
    if (used != exp_text.size() || e > 4096 || e < -4096) return fail();
    exponent += e;
  }
  mpz_class mantissa(digits, 10);
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(exponent < 0 ? -exponent : exponent));
  Rational q = exponent < 0 ? Rational(mantissa, scale) : Rational(mantissa * scale);
  q.canonicalize();
  return negative ? Rational(-q) : q;
}

}  // namespace tin
