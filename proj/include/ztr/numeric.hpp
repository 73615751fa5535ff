#pragma once

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace ztr {

using Integer = mpz_class;
using Rational = mpq_class;

// Error taxonomy shared across modules. Keep them distinct types so tests can
// assert on the precise failure mode.
struct domain_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct parse_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct budget_exceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct not_a_unit : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct precision_exhausted : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct incomplete_digit_set : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct grid_mismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct hypothesis_failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// base^e for integer e of either sign. base != 0 when e < 0.
Rational pow_q(const Rational& base, long e);

Integer pow_z(const Integer& base, unsigned long e);

// Conversion keeping ~64 mantissa bits, enough for the 1e-9 margins used by
// the float-side checks (plain mpq_get_d would truncate to 53 bits).
long double to_ld(const Integer& z);
long double to_ld(const Rational& q);

inline Rational abs_q(const Rational& q) { return q < 0 ? Rational(-q) : q; }

// Parse "p/q" or "p" (optionally signed) into a canonical rational.
Rational parse_rational(const std::string& s);

std::string to_string(const Rational& q);
std::string to_string(const Integer& z);

// Locale-independent "%.17g" (round-trips doubles, byte-stable in reports).
std::string fmt_g(double v);

// splitmix64 / xoshiro256** generator. We roll our own instead of <random> so
// that sampled test vectors are identical across standard libraries, and so
// suites can derive independent per-row substreams from one user seed.
class Rng {
 public:
  explicit Rng(uint64_t seed);

  uint64_t next();
  // Uniform on [0, n); n > 0.
  uint64_t below(uint64_t n);
  // Uniform on [0, 1) with 53 random bits.
  double real();
  // Uniform integer in [lo, hi] inclusive.
  long long range(long long lo, long long hi);
  // log-uniform magnitude in [lo, hi], random sign.
  double signed_log_uniform(double lo, double hi);

  // Independent substream; label mixes into the state, so row k of a suite
  // always sees the same stream no matter how other rows consume entropy.
  Rng substream(uint64_t label) const;

 private:
  uint64_t s_[4];
  uint64_t seed_;
};

}  // namespace ztr
