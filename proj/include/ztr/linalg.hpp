#pragma once

#include <optional>
#include <vector>

#include "ztr/numeric.hpp"

namespace ztr {

using QVec = std::vector<Rational>;
using QMat = std::vector<std::vector<Rational>>;  // row major
using ZVec = std::vector<Integer>;
using ZMat = std::vector<std::vector<Integer>>;

QVec mat_apply(const QMat& A, const QVec& x);
QMat mat_mul(const QMat& A, const QMat& B);
QMat mat_identity(size_t n);

size_t rank(QMat A);  // by value, destroyed internally

// One solution of A x = b, or nullopt when inconsistent. Free variables are
// set to zero.
std::optional<QVec> solve(QMat A, QVec b);

// Basis of the right kernel of A (dim = cols - rank).
std::vector<QVec> kernel_basis(const QMat& A);

// Minimizer of the euclidean norm of (b - A y) via the normal equations;
// always defined (least-squares solution with free variables zeroed).
QVec least_squares(const QMat& A, const QVec& b);

// Nonzero diagonal of the Smith normal form, each entry positive, divisor
// chain d1 | d2 | ... Pure reduction, no transforms kept.
std::vector<Integer> smith_divisors(ZMat A);

// Z-basis of the integer kernel {x : A x = 0}, saturated (the kernel of the
// map, not a finite-index sublattice). Uses column operations tracked on an
// identity matrix.
ZMat integer_kernel(const ZMat& A);

// Exact LP: minimize c.x subject to A x <= b (x free). Desk-scale dense
// simplex with Bland's rule on rationals. Returns nullopt when unbounded;
// throws domain_error when infeasible.
struct LpResult {
  Rational value;
  QVec x;
};
std::optional<LpResult> lp_minimize(const QMat& A, const QVec& b, const QVec& c);

}  // namespace ztr
