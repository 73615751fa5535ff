#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ztr/laurent.hpp"
#include "ztr/report.hpp"

namespace ztr {

// Rational evaluation point with 0 < |x| < 1.
struct RealPoint {
  Rational x;
  explicit RealPoint(const Rational& v) : x(v) {
    if (!(abs_q(v) < 1) || v == 0) throw domain_error("evaluation point needs 0 < |x| < 1");
  }
};

struct Interval {
  Rational lo, hi;
  bool contains(const Rational& v) const { return lo <= v && v <= hi; }
  Rational width() const { return hi - lo; }
};

// Evaluate sum a_n x^n over the known coefficients exactly; the unknown tail
// (exponents >= order) is enclosed using |a_n| <= tail_coeff_bound, giving
// the interval value +- bound * |x|^order / (1 - |x|). Exact series yield a
// width-zero interval.
Interval theta_eval(const JetLaurent& f, const RealPoint& x,
                    const Rational& tail_coeff_bound);

// Greedy base-x expansion of y >= 0 with integer digits in [0, N-1], valid
// when x >= 1/N. Digit exponents strictly increase (each step takes the
// largest power of x still below the remainder). Stops after `terms` digits
// or when the remainder hits zero; the dropped remainder is < x^(last n).
ExactLaurent real_digit_expand(const Rational& y, const Rational& x, long N,
                               int terms);

// Signed expansion z = sum a_i x^i with |a_i| <= ceil(1/x), exponents
// strictly increasing from the minimal n with x^n <= |z|. This is the lift
// realizing nu_r(g) <= |z|^p / (x (1 - r)) for any weight r in (x, 1).
ExactLaurent bounded_digit_expand(const Rational& z, const Rational& x,
                                  int terms);

// x in Z_p with positive valuation, tracked modulo p^K.
struct PadicPoint {
  Integer p;
  Integer x;    // representative mod p^K
  long K;       // working precision
  long m;       // v_p(x), must be >= 1
  PadicPoint(const Integer& p_, const Integer& x_, long K_);
};

// Digits of y in base x with digit set {0, ..., p^m - 1}; unique, and
// theta_x of the result reproduces y mod p^K. Throws precision_exhausted
// when the remaining precision cannot support another digit.
ExactLaurent padic_digit_expand(const Integer& y, const PadicPoint& pt);

Integer padic_theta(const ExactLaurent& f, const PadicPoint& pt);

// Integer-coefficient power series f = 1 + O(T^n_vanish) with theta_x(f) = 0,
// produced mod T^order together with rigorous bounds:
//   coeff_bound   >= |a_k| for every k (also past the truncation),
//   residual_bound >= |theta_x(known part)| from the tail alone.
struct GeneratorCertificate {
  JetLaurent f;
  Rational x_re, x_im;  // x_im == 0 for real points
  Rational r;
  int64_t n_vanish;     // f == 1 mod T^n_vanish
  Rational coeff_bound;
  Rational residual_bound;
};

// Theorem-of-the-lecture construction: start from 1 - x^{-1} T (times the
// conjugate factor when x is complex), clear low-order coefficients by
// (1 - (a_n/m) T^n)^m steps until r^n < 2(1-r), then multiply by the greedy
// unit h with |c_i| <= 1/2 to force integer coefficients.
GeneratorCertificate construct_generator(const Rational& x_re, const Rational& x_im,
                                         const Radius& r, int64_t order = 200);

// Ring map Z((T))_r -> R[X]/X^n sending T to x^(1+X); standard coordinates.
std::vector<double> theta_jet_eval(const JetLaurent& f, double x, int n);

// Desk checks for the four constants of the theta story at (r, p):
// C1 (multiplication), C2 (division, empirical), C3 = 1, C4 = 1/(r'(1-r)).
// p = log r / log r' may be irrational; the comparison runs in long double
// with `margin`, plus an exact rational route when p is rational.
std::vector<CheckRow> verify_lec7_constants(const Radius& r, const Rational& p,
                                            int64_t m, int samples, uint64_t seed);

// Helper shared with the suites: the evaluation radius r' with (r')^p = r.
// Exact when r has an exact p_den-th root; otherwise the closest rational
// with denominator <= 10^6 (the constants story only needs *some* rational
// pair (r', r), and the checks then use the pair's own exponent).
struct EvalRadius {
  Rational rp;      // rational evaluation radius actually used
  bool exact;       // whether rp^p == r holds exactly
};
EvalRadius eval_radius_for(const Radius& r, const Rational& p);

}  // namespace ztr
