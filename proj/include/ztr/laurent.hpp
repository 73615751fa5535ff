#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ztr/numeric.hpp"

namespace ztr {

// Weight radius r with 0 < r < 1, kept exact. The weighted l1 norm of an
// integer Laurent series f = sum a_n T^n is nu_r(f) = sum |a_n| r^n.
struct Radius {
  Rational v;
  explicit Radius(const Rational& r) : v(r) {
    if (!(r > 0 && r < 1)) throw domain_error("radius must satisfy 0 < r < 1");
  }
};

using CoeffMap = std::map<int64_t, Integer>;  // exponent -> nonzero coefficient

// Finitely supported integer Laurent series, every coefficient known.
struct ExactLaurent {
  CoeffMap c;

  ExactLaurent() = default;
  explicit ExactLaurent(CoeffMap m) : c(std::move(m)) { prune(); }

  void prune();  // drop explicit zeros
  void set(int64_t n, const Integer& a);
  Integer coeff(int64_t n) const;
  bool is_zero() const { return c.empty(); }
  int64_t min_exp() const;  // requires nonzero
  int64_t max_exp() const;

  bool operator==(const ExactLaurent& o) const { return c == o.c; }
};

// Series known modulo T^order: coefficients stored for exponents in
// [lead, order), and "no terms below lead" is a promise, not a convention.
// exact == true means there is no unknown tail at all (order is then just
// one past the largest stored exponent, or lead when empty).
struct JetLaurent {
  int64_t lead = 0;
  int64_t order = 0;
  bool exact = false;
  CoeffMap c;

  JetLaurent() = default;
  JetLaurent(int64_t lead_, int64_t order_, CoeffMap m);

  static JetLaurent from_exact(const ExactLaurent& f);
  ExactLaurent known_part() const { return ExactLaurent(c); }

  Integer coeff(int64_t n) const;
  void check() const;  // enforce lead <= order and support within [lead, order)
};

Rational weighted_norm(const ExactLaurent& f, const Radius& r);

JetLaurent ring_add(const JetLaurent& f, const JetLaurent& g);
JetLaurent ring_sub(const JetLaurent& f, const JetLaurent& g);
// Truncation order of the product is the best bound derivable from the
// factors: min over the cross terms lead(f)+order(g), lead(g)+order(f).
JetLaurent ring_mul(const JetLaurent& f, const JetLaurent& g);
JetLaurent shift(const JetLaurent& f, int64_t k);  // multiply by T^k

// Inverse of a unit. The lowest nonzero coefficient must be +-1 (say at
// exponent k); the result g satisfies f*g == 1 mod T^m exactly, with support
// in [-k, m-k). Throws not_a_unit otherwise.
JetLaurent invert_unit(const JetLaurent& f, int64_t m);

// All integer series supported on exponents [0, m] with nu_r <= c, in a
// deterministic order (lexicographic in (exponent, coefficient)). Throws
// budget_exceeded once more than `cap` elements have been produced.
std::vector<ExactLaurent> enumerate_ball(const Radius& r, const Rational& c,
                                         int64_t m, size_t cap);

// Default enumeration cap; ZTR_BUDGET_CAP in the environment overrides it.
size_t budget_cap();

// Lift of an F_p Laurent polynomial given by digits in [0, p): the digits are
// reused verbatim as integer coefficients.
ExactLaurent mod_p_lift(const std::map<int64_t, long>& digits, long p);

// Canonical text form "a*T^n + b*T^m" with ascending exponents; "0" if empty.
std::string to_text(const ExactLaurent& f);
std::string to_text(const JetLaurent& f);
ExactLaurent parse_series(const std::string& s);

// JSON text form: {"terms": [[n, "a"], ...], "order": m or null, "lead": l}.
std::string to_json(const JetLaurent& f);
std::string to_json(const ExactLaurent& f);
JetLaurent jet_from_json(const std::string& s);

}  // namespace ztr
