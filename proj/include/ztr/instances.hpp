#pragma once

#include <string>

#include "ztr/normed.hpp"

namespace ztr {

// Randomized but hypothesis-true inputs for the snake and double complex
// checkers. Everything is built from split complexes (u,v) -> (v,0) whose
// contraction (u,v) <- (0,u) has exact operator norm <= k by a weight
// sandwich, then conjugated by unimodular integer matrices with the norms
// pulled back through the inverse, so the checkers see dense matrices while
// every hypothesis still holds for all vectors, not just probed ones. That
// is what makes "zero conclusion violations across accepted instances" a
// theorem about the implementation rather than luck.

struct SnakeInstance {
  AdmissibleSystem m_sys, mp_sys;
  std::vector<std::vector<QMat>> f;  // per level, per degree
  Rational k;
  int m = 1;
};

SnakeInstance make_snake_instance(Rng& rng);

// Degenerate shapes from the checker's edge cases: f = 0 (quotient is all of
// M') and f = id (quotient vanishes).
SnakeInstance make_snake_zero_m(Rng& rng);
SnakeInstance make_snake_identity(Rng& rng);

// Two-level single-step system violating degree-0 k-exactness by the factor
// `blowup` (defect / bound), for negative-control tests.
AdmissibleSystem make_k_exact_violation(const Rational& k, const Rational& blowup);

struct DoubleInstance {
  DoubleComplexSystem sys;
  Rational k;
};

DoubleInstance make_double_instance(Rng& rng);

// r times a signed permutation on n coordinates with the flat l1 norm, the
// exact model of an operator scaling every norm by r.
RNormedModule make_shift_module(Rng& rng, size_t n, const Rational& r);

// Serializations for shipping a rejected or violating instance alongside a
// report. One-way: enough to reproduce the matrices and weights exactly.
std::string snake_instance_json(const SnakeInstance& inst);
std::string double_instance_json(const DoubleInstance& inst);

}  // namespace ztr
