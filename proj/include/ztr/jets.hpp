#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ztr/laurent.hpp"
#include "ztr/report.hpp"

namespace ztr {

// Truncated real jets a_0 + a_1 X + ... + a_{n-1} X^{n-1}, standard
// coordinates. The Teichmueller coordinates of a jet are the unique reals
// x_0, ..., x_{n-1} with jet = [x_0] + [x_1] X + ... + [x_{n-1}] X^{n-1},
// where [x] = x |x|^X = x + x log|x| X + x log^2|x|/2 X^2 + ...
using Jet = std::vector<double>;  // size = jet order n

Jet jet_add(const Jet& a, const Jet& b);
Jet jet_scale(const Jet& a, double s);
Jet jet_mul(const Jet& a, const Jet& b);  // truncated convolution

// Standard coordinates of [x] * X^shift, truncated at order n.
Jet teich_expand(double x, int n, int shift = 0);

// Iterative peeling: subtract [x_0], divide by X, repeat. 0*log 0 reads 0.
std::vector<double> teich_coords(const Jet& a);
Jet teich_to_std(const std::vector<double>& tc);

// Measure on a finite set S with jet values: column s holds the jet at s.
// The lp mass is taken in Teichmueller coordinates.
struct JetMeasure {
  int n = 1;
  double p = 1.0;
  std::vector<std::vector<double>> teich;  // [s][i], i < n

  size_t points() const { return teich.size(); }
};

double lp_norm(const JetMeasure& w);

// Image measure along f: S -> S' (values in [0, fibers)): jets add fiberwise
// in standard coordinates, then Teichmueller coordinates are re-extracted.
JetMeasure pushforward(const JetMeasure& w, const std::vector<size_t>& f,
                       size_t fibers);

struct ConstantEstimate {
  double sup_ratio = 0.0;
  std::string witness;   // maximizing sample, printable
  size_t trials = 0;
};

// Empirical norm-inflation constants for jet measures:
//   kind = "pushforward": ||f_* w|| / ||w|| under full collapse,
//   kind = "addition":    ||u + v|| / max(||u||, ||v||),
//   kind = "scalar":      ||lambda u|| / ||u||, lambda sampled in [-1, 1].
// No exact value is asserted for any of these; callers compare against the
// theory only where the theory pins something (p < 1 bounded, p = 1 not).
ConstantEstimate estimate_constants(const std::string& kind, int n, double p,
                                    int trials, uint64_t seed);

// The explicit unbounded-ratio family at (n=2, p=1): uniform mass 1/k on k
// points collapsed to one point has teich coordinates (1, log k), so the
// ratio is 1 + log k.
double collapse_ratio_uniform(size_t k);

// Integer-coefficient measures on S truncated mod T^(order+1): entry (n, s)
// is the T^n coefficient at s. reduced == true restricts to n >= 1.
struct TruncatedMeasure {
  size_t S = 1;
  int64_t order = 0;
  bool reduced = false;
  std::map<std::pair<int64_t, size_t>, Integer> a;

  void set(int64_t n, size_t s, const Integer& v);
  Integer coeff(int64_t n, size_t s) const;
};

Rational measure_norm(const TruncatedMeasure& w, const Radius& r);
TruncatedMeasure measure_pushforward(const TruncatedMeasure& w,
                                     const std::vector<size_t>& f, size_t fibers);

// lambda_{n,m} <= lambda_n * lambda'_m factorization of a doubly-null
// sequence (entries in (0, 1], nonincreasing sufficient): both factors are
// sqrt(max over the L-shaped tail).
struct NullFactorization {
  std::vector<double> row;  // lambda_n
  std::vector<double> col;  // lambda'_m
};
NullFactorization double_null_factorize(const std::vector<std::vector<double>>& lam);

// Desk-scale isomorphism check between the truncated-ball picture and the
// lp jet picture: forward theta is componentwise and exact-rational, the
// backward direction lifts componentwise through the bounded digit
// expansion. Returns per-check rows (see theta.hpp for CheckRow).
struct QuotientIsoParams {
  Rational r = Rational(1, 2);    // weight
  Rational rp = Rational(1, 4);   // evaluation point, 0 < rp < r
  size_t S = 2;
  int64_t m = 4;                  // truncation order of the ball side
  Rational c = Rational(1);       // ball size
  int backward_samples = 50;
  uint64_t seed = 1;
  size_t cap = 2'000'000;
};

std::vector<CheckRow> quotient_iso_check(const QuotientIsoParams& params);

}  // namespace ztr
