#pragma once

// Polyhedral lattices: cones cut out by rational covectors, Hilbert bases of
// their lattice-point monoids, same-sign digit decompositions of dual
// vectors, and the splitting of a measure into N parts of mass c/N + d.

#include <vector>

#include "ztr/linalg.hpp"
#include "ztr/numeric.hpp"
#include "ztr/vendor_json.hpp"

namespace ztr {

struct PolyLattice {
  size_t k = 0;                    // rank
  std::vector<QVec> functionals;   // closed under negation
  std::vector<ZVec> generators;    // the norm-generating test elements

  // validates F = -F, shapes, and norm positivity on the standard basis
  PolyLattice(size_t rank, std::vector<QVec> F, std::vector<ZVec> lambdas);

  Rational norm(const QVec& v) const;  // max over functionals
  Rational norm_z(const ZVec& v) const;
};

// Generating set of the monoid {x in Z^k : <phi, x> >= 0 for all phi}.
// Complete but not necessarily minimal; pointed cones are reduced towards
// minimality, cones with lineality keep the raw fundamental-domain points.
std::vector<ZVec> hilbert_basis(size_t k, const std::vector<QVec>& constraints,
                                size_t box_cap = 2'000'000);

// Exhaustive generation check: every lattice point of the cone with
// |coords| <= box_radius is a nonnegative integer combination of the basis.
// Requires a pointed cone.
bool check_generates(size_t k, const std::vector<QVec>& constraints,
                     const std::vector<ZVec>& basis, long box_radius);

// Digits: all sums sum_j n_j y_j with n_j in [0, N) over the Hilbert basis of
// every sign cone of the generators. Always contains 0.
std::vector<ZVec> digit_set(const PolyLattice& L, long N,
                            size_t cap = 2'000'000);

struct SameSignSplit {
  ZVec x0;     // x = N*x0 + digit
  ZVec digit;  // element of A
};

// Splits x so that, for every generator lambda_i, digit(lambda_i) and
// N*x0(lambda_i) are weakly of the same sign (0 is compatible with both).
SameSignSplit same_sign_decompose(const PolyLattice& L, const ZVec& x, long N,
                                  const std::vector<ZVec>& A);

// A finitely supported measure with dual-lattice coefficients x_{n,s} and
// weight (r')^n on level n = 1..order.
struct LatticeMeasure {
  size_t S = 1;
  long order = 1;
  Rational rp;
  std::vector<std::vector<ZVec>> x;  // [n-1][s]

  LatticeMeasure(size_t base, long ord, Rational radius, size_t rank);
};

// nu_i(w) = sum |<x_{n,s}, lambda_i>| (r')^n, exact
Rational measure_nu(const PolyLattice& L, const LatticeMeasure& w, size_t i);
// max_i nu_i(w)/||lambda_i||, the least c with w in Hom(Lambda, ...)_{<= c}
Rational membership_level(const PolyLattice& L, const LatticeMeasure& w);

struct KeyDecomposition {
  std::vector<LatticeMeasure> parts;         // exactly N, summing to w
  Rational d;                                // the additive constant used
  LatticeMeasure w0;                         // the divisible bulk
  std::vector<std::vector<ZVec>> digit;      // digit per position
  std::vector<ZVec> digits_used;             // the digit alphabet A
};

// Splits w into N parts, each of per-functional mass
//   nu_i(part) <= (c/N) ||lambda_i|| + d
// where c = membership_level(w). The scalar path (rank 1) pools unit items
// and achieves d = 1; the general path bins positions per digit value with
// d = max_i sum_{a in A} |a(lambda_i)|.
KeyDecomposition key_decompose(const PolyLattice& L, const LatticeMeasure& w,
                               long N);

nlohmann::ordered_json lattice_to_json(const PolyLattice& L);
PolyLattice lattice_from_json(const nlohmann::json& j);

}  // namespace ztr
