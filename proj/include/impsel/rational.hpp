#pragma once

#include <gmpxx.h>

#include <string>

#include "impsel/errors.hpp"

namespace impsel {

// Exact arithmetic carrier for probabilities, confidence parameters, and
// guarantee values. All audits compare rationals for equality; doubles are
// only used at the Monte Carlo / reporting boundary.
using Rational = mpq_class;
using BigInt = mpz_class;

inline Rational rat(long num, long den = 1) {
  if (den == 0) throw input_error("rational with zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

// Parses "p/q" or "p" (base 10). Denominator must be nonzero.
inline Rational rat_parse(const std::string& s) {
  if (s.empty()) throw input_error("empty rational literal");
  Rational q;
  if (mpq_set_str(q.get_mpq_t(), s.c_str(), 10) != 0)
    throw input_error("bad rational literal: '" + s + "'");
  if (q.get_den() == 0) throw input_error("rational with zero denominator: '" + s + "'");
  q.canonicalize();
  return q;
}

// Canonical "p/q" (or "p" when the denominator is 1).
inline std::string rat_str(const Rational& q) { return q.get_str(); }

inline double rat_double(const Rational& q) { return q.get_d(); }

inline Rational rat_pow(const Rational& base, unsigned long exp) {
  if (exp == 0) return rat(1);  // 0^0 == 1 by convention
  Rational r;
  mpz_pow_ui(mpq_numref(r.get_mpq_t()), mpq_numref(base.get_mpq_t()), exp);
  mpz_pow_ui(mpq_denref(r.get_mpq_t()), mpq_denref(base.get_mpq_t()), exp);
  r.canonicalize();
  return r;
}

inline BigInt big_factorial(unsigned long n) {
  BigInt r;
  mpz_fac_ui(r.get_mpz_t(), n);
  return r;
}

inline BigInt big_binomial(unsigned long n, unsigned long k) {
  BigInt r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

inline bool rat_in_unit_interval(const Rational& q) { return q >= 0 && q <= 1; }

}  // namespace impsel
