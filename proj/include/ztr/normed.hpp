#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "ztr/linalg.hpp"
#include "ztr/numeric.hpp"

namespace ztr {

// Norms on Q^n built from three layers: a weighted l1 or max norm, an
// optional invertible change of coordinates G (norm of G*x), and an optional
// quotient stage  ||x|| = min_u base(x - F u)  with F the embedding of the
// subgroup being divided out. The quotient minimum ranges over rational u,
// which matches dividing by the closure of the image: the infimum over a
// dense subgroup equals the LP minimum.
enum class NormKind { L1W, LinfW };

struct Norm {
  NormKind kind = NormKind::L1W;
  std::vector<Rational> weights;  // strictly positive, one per coordinate of G*x
  QMat G;                         // empty means identity; otherwise square invertible
  std::shared_ptr<const Norm> quotient_base;  // set iff this is a quotient norm
  QMat F;                                     // columns span the divided subgroup

  static Norm l1(std::vector<Rational> w);
  static Norm linf(std::vector<Rational> w);
  Norm with_pullback(QMat g) const;
  static Norm quotient(Norm base, QMat f);

  size_t dim() const;  // coordinate count of the space the norm lives on
  Rational eval(const QVec& x) const;
  void validate() const;
};

// min over y of || target - D y ||_n. Pass an empty D to get a plain norm
// evaluation through the same LP path. This is the workhorse behind quotient
// norms and the exactness defect.
Rational defect_min(const Norm& n, const QVec& target, const QMat& D);

// Extreme points of the unit ball. For a quotient norm these are the base
// ball's vertices: the quotient ball is the image of the base ball, so a sup
// of any convex function over it may be taken over these representatives.
std::vector<QVec> ball_vertices(const Norm& n);

// Exact operator norm sup ||A x||_to / ||x||_from, computed over ball
// vertices of the source. When the source is a quotient norm the map must
// descend (A*F columns must be null for `to`); checked, throws domain_error.
Rational op_norm(const QMat& A, const Norm& from, const Norm& to);

// Exact sup over x with F x != 0 of ||R x||_num / ||F x||_den, or nullopt
// when the sup is infinite (some kernel vector of F survives R). `num` must
// be a weighted norm (no quotient stage) and so must `den`.
std::optional<Rational> sup_ratio(const QMat& R, const QMat& F, const Norm& num,
                                  const Norm& den);

struct NormedSpace {
  size_t dim = 0;
  Norm norm;
};

// One cochain complex: d[i] maps spaces[i] to spaces[i+1].
struct LevelComplex {
  std::vector<NormedSpace> spaces;
  std::vector<QMat> d;
};

// Complexes indexed by an ascending grid of levels c, with restriction maps
// stored only between adjacent levels (res[l][i] goes from level l+1 down to
// level l), so transitivity of restriction holds by construction. validate()
// checks d*d = 0, the commuting squares res*d = d*res, and that every
// differential and restriction has exact operator norm <= 1.
struct AdmissibleSystem {
  std::vector<Rational> levels;
  std::vector<LevelComplex> complexes;
  std::vector<std::vector<QMat>> res;

  void validate() const;
  // composite restriction from level index hi to lo at the given degree
  QMat res_between(size_t hi, size_t lo, size_t degree) const;
};

// Falsifier for <=k-exactness in degrees <= m: for probes x in C^i at level
// kc, the defect min_y ||res(x) - d(y)|| is compared exactly against
// k*||d(x)||. Probes are the coordinate basis, an exact kernel basis of the
// outgoing differential, and seeded random integer vectors. A finite probe
// set can only refute the property, so reports say "no violation found".
struct KExactRow {
  size_t level_hi = 0, level_lo = 0;
  size_t degree = 0;
  size_t probes = 0, violations = 0;
  Rational worst_excess;  // max of defect - k*||d(x)||, positive means violated
  double worst_ratio = 0;  // defect / (k*||d(x)||) over probes with nonzero rhs
};

struct KExactReport {
  bool violation_found = false;
  size_t total_probes = 0, total_violations = 0;
  double worst_ratio = 0;
  std::vector<KExactRow> rows;
};

KExactReport check_k_exact(const AdmissibleSystem& sys, const Rational& k, int m,
                           const Rational& c0, size_t random_probes, Rng& rng);

// The quotient system N = M' / image(f): same underlying complexes and
// restrictions as M', norms wrapped in a quotient stage with F = f at each
// spot. Differentials descend because f is a map of complexes.
AdmissibleSystem quotient_system(const AdmissibleSystem& mp,
                                 const std::vector<std::vector<QMat>>& f);

// Normed snake lemma checker. Hypotheses verified before anything counts:
// f norm-nonincreasing and commuting with d and res, the exact bound
// sup ||res_{kc,c}(x)|| <= k ||f_{kc}(x)|| in degrees 0..m+1, and both
// systems <=k-exact (probed). Rejection throws hypothesis_failure. The
// conclusion, <= max(k^4, k^3+k+1)-exactness of N in degrees <= m-1, is then
// probed like check_k_exact.
struct SnakeOutcome {
  Rational constant;  // max(k^4, k^3+k+1)
  double hypothesis_worst_ratio = 0;
  KExactReport conclusion;
};

SnakeOutcome snake_quotient_check(const AdmissibleSystem& m_sys,
                                  const AdmissibleSystem& mp_sys,
                                  const std::vector<std::vector<QMat>>& f,
                                  const Rational& k, int m, size_t probes, Rng& rng);

// Double complex with commuting squares: d vertical (p direction), dp
// horizontal (q direction). Levels form a geometric grid in kp. The homotopy
// h[l] maps M^{0,1} at level l+1 to M^{1,0} at level l, and delta[l] maps
// M^{0,0} at level l to M^{1,0} at level l+1 (it travels up one level; the
// factored map starts two levels higher).
struct DoubleLevel {
  std::vector<std::vector<NormedSpace>> M;  // [p][q]
  std::vector<std::vector<QMat>> d;         // (p,q) -> (p+1,q)
  std::vector<std::vector<QMat>> dp;        // (p,q) -> (p,q+1)
};

struct DoubleComplexSystem {
  Rational kp;  // level ratio k'
  std::vector<Rational> levels;
  std::vector<DoubleLevel> lv;
  std::vector<std::vector<std::vector<QMat>>> res;  // res[l][p][q]: level l+1 -> l
  std::vector<QMat> h;
  std::vector<QMat> delta;

  void validate() const;
};

// Checker for the degree-0 case of the double complex criterion. Verified
// hypotheses: columns give sup ||res_{k'c,c}(x)|| <= k ||d(x)||_{k'c} exactly,
// ||h|| <= H exactly, the homotopic map res*d + h*dp equals delta*res as
// matrices, and ||delta|| <= eps = 1/(2k) exactly. The concluded inequality
// ||res_{k'^2 c, c}(x)|| <= max(k'^2, 2kH) ||dp(x)|| is probed; the proof's
// sharper 2kH bound is recorded as chain_worst. Degrees above 0 would need
// the quotient induction and are out of scope here; m > 0 throws.
struct DoubleOutcome {
  Rational constant;  // max(k'^2, 2 k H)
  Rational H, eps;
  double chain_worst = 0;  // worst ||res x|| / (2kH ||dp x||)
  KExactReport conclusion;
};

DoubleOutcome double_complex_check(const DoubleComplexSystem& sys, const Rational& k,
                                   int m, size_t probes, Rng& rng);

// Module with an operator T scaling the norm by exactly r (r times a signed
// permutation against permutation-invariant weights).
struct RNormedModule {
  Rational r;
  Norm norm;
  QMat T;

  void validate(Rng& rng) const;
};

// Finite stand-in for the measure ball: integer coefficient tuples
// (a_1..a_depth) of weight sum |a_n| rp^n <= c, closed under the index-down
// shift that models T^{-1} (the shifted-out coefficient is dropped and the
// weight divides by rp, so shifting the inner ball stays inside the outer).
struct ShiftModel {
  Rational rp, c;
  size_t depth = 0;
  std::vector<ZVec> outer;   // weight <= c, sorted; index 0 is the zero tuple
  std::vector<ZVec> inner;   // weight <= rp*c, subset of outer
  std::vector<size_t> inner_to_outer;

  Rational weight(const ZVec& pt) const;
  ZVec shift_down(const ZVec& pt) const;
  std::optional<size_t> outer_index(const ZVec& pt) const;
};

ShiftModel build_shift_model(const Rational& rp, const Rational& c, size_t depth,
                             size_t point_cap);

// Geometric series solver for f(x) = T^{-1} g(x) - g(T^{-1} x): the sum
// g(x) = sum_n T^{n+1} ftilde(T^{-n} x) with ftilde the extension of f by
// zero outside the inner ball. Orbits of the shift reach the zero tuple in
// at most `depth` steps, and the remaining geometric tail at the zero tuple
// is summed in closed form through (I - T)^{-1}, so the identity holds
// exactly in rational arithmetic. term_budget below depth+1 throws
// budget_exceeded (the truncation would not reach the closed-form tail).
struct TinvResult {
  std::vector<QVec> g;      // indexed by ShiftModel::outer
  Rational f_norm, g_norm;  // sup over table points of the module norm
  Rational residual_max;    // max over inner points of ||f(x) - T^{-1}g(x) + g(T^{-1}x)||
  double bound_ratio = 0;   // g_norm / ((r/(1-r)) f_norm)
};

TinvResult tinv_solve(const ShiftModel& model, const RNormedModule& V,
                      const std::vector<QVec>& f, const Rational& eps,
                      size_t term_budget);

// ||T^{-1} g - g(T^{-1} .)|| / ||g|| for one table, to sample the forward
// operator norm (bounded by 1/r + 1).
Rational tinv_forward_ratio(const ShiftModel& model, const RNormedModule& V,
                            const std::vector<QVec>& g);

// Lift through the completion of a four-term complex M0 -> M1 -> M2 -> M3,
// in floating point. The caller supplies the solvers whose constants C and D
// drive the bound: solve0 lifts kernel elements of d1 with ||x|| <= C||y||,
// solve1 lifts kernel elements of d2 with ||y|| <= D||z||, approx finds a
// dense-subgroup element within delta of a completed element. The lift is
// accumulated as a series of kernel corrections with the epsilon budget
// split geometrically; an oracle output violating its contract throws
// hypothesis_failure.
struct CompleteLiftProblem {
  size_t dim0 = 0;  // coordinate count of M0, for the zero-input shortcut
  std::function<double(const std::vector<double>&)> norm0, norm1, norm2;
  std::function<std::vector<double>(const std::vector<double>&)> d0, d1;
  double C = 1, D = 1;
  double d1_norm = 1;  // any upper bound for ||d1||
  std::function<std::vector<double>(const std::vector<double>&)> solve0, solve1;
  std::function<std::vector<double>(const std::vector<double>&, double)> approx;
};

struct CompleteLiftResult {
  std::vector<double> x_hat;
  double x_norm = 0, y_norm = 0;
  double residual = 0;  // ||y_hat - d0(x_hat)||
  bool bound_ok = false;
  size_t corrections = 0;
};

CompleteLiftResult complete_exact_lift(const CompleteLiftProblem& pb,
                                       std::vector<double> y_hat, double eps);

}  // namespace ztr
