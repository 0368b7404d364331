#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace hyperell {

using Integer = mpz_class;
using Rational = mpq_class;

inline Integer int_pow(std::uint64_t base, std::uint64_t exp) {
  Integer r;
  mpz_ui_pow_ui(r.get_mpz_t(), base, exp);
  return r;
}

inline Rational rational_pow(const Rational& base, std::uint64_t exp) {
  Rational r;
  mpz_pow_ui(mpq_numref(r.get_mpq_t()), base.get_num_mpz_t(), exp);
  mpz_pow_ui(mpq_denref(r.get_mpq_t()), base.get_den_mpz_t(), exp);
  r.canonicalize();
  return r;
}

// "num/den", or "num" when the denominator is 1.
inline std::string to_string(const Rational& x) { return x.get_str(); }

inline std::string to_string(const Integer& x) { return x.get_str(); }

// Nearest double; mpq_get_d truncates, which is good enough for convenience output.
inline double to_double(const Rational& x) { return x.get_d(); }

inline bool is_integer(const Rational& x) { return x.get_den() == 1; }

}  // namespace hyperell
