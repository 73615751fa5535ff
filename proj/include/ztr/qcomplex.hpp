#pragma once

// MacLane Q-complex over a finitely generated abelian group: the inductive
// differential, the addition-vs-projections homotopies, filtered levels, and
// integer homology.
//
// Degree n of Q(M) is the free abelian group on 2^n-tuples of elements of M.
// The differential is pinned by the recursion
//   d_{n+1} = sigma_1 - sigma_2 - d_n^{(M x M)}
// under the identification that pairs tuple positions j and j + 2^n. The
// degree-2 differential expands to the familiar six-term formula; that
// expansion is regression-tested.

#include <functional>
#include <map>
#include <vector>

#include "ztr/numeric.hpp"
#include "ztr/vendor_json.hpp"

namespace ztr {

// Group elements are tuples of residues, one per cyclic factor. A factor
// value of 0 marks an infinite cyclic factor (used by the filtered models);
// finite factors must be >= 2.
using GroupElem = std::vector<long>;
using QTuple = std::vector<long>;  // flat concatenation of group elements

struct FinAbGroup {
  std::vector<long> factors;

  explicit FinAbGroup(std::vector<long> f);
  size_t grank() const { return factors.size(); }
  bool finite() const;
  long order() const;  // throws domain_error when an infinite factor is present

  GroupElem zero() const { return GroupElem(factors.size(), 0); }
  GroupElem reduce(GroupElem e) const;
  GroupElem add(const GroupElem& a, const GroupElem& b) const;
  GroupElem neg(const GroupElem& a) const;
  std::vector<GroupElem> elements() const;

  FinAbGroup square() const { return power(2); }
  FinAbGroup power(size_t k) const;

  bool operator==(const FinAbGroup& o) const { return factors == o.factors; }
};

struct QChain {
  FinAbGroup M;
  int degree = 0;  // tuples carry 2^degree group elements
  std::map<QTuple, Integer> terms;

  QChain(FinAbGroup g, int deg) : M(std::move(g)), degree(deg) {
    if (deg < 0) throw domain_error("QChain: negative degree");
  }
  size_t components() const { return size_t(1) << degree; }
  size_t flat_len() const { return components() * M.grank(); }
  void add_term(const QTuple& t, const Integer& c);
  bool is_zero() const { return terms.empty(); }
  bool operator==(const QChain& o) const;
};

QChain qchain_single(const FinAbGroup& M, int degree, const QTuple& t);
QChain chain_add(const QChain& a, const QChain& b);
QChain chain_sub(const QChain& a, const QChain& b);

// d: Q_n -> Q_{n-1}, degree >= 1.
QChain q_differential(const QChain& ch);

enum class SigmaKind { Sum, Split };

// ch lives over G x G; the result lives over G. Sum adds the two halves of
// every component, Split is the sum of the chains of first and second halves.
QChain q_sigma(SigmaKind kind, const FinAbGroup& G, const QChain& ch);

// The identification homotopy Q_n(G x G) -> Q_{n+1}(G): component j of the
// input contributes its halves at output positions j and j + 2^n.
QChain q_identify(const FinAbGroup& G, const QChain& ch);

// Exhaustive check of sigma_1 - sigma_2 = d h + h d on all basis tuples of
// Q_n(M x M) for n <= n_max.
bool verify_homotopy(const FinAbGroup& M, int n_max);

// Exhaustive d(d(t)) == 0 on all basis tuples of degrees 2..n_max.
bool verify_dd_zero(const FinAbGroup& M, int n_max);

struct HomologyResult {
  long free_rank = 0;
  std::vector<Integer> torsion;  // ascending divisor chain, entries > 1
  // torsion divisors followed by one 0 per free rank
  std::vector<Integer> divisor_list() const;
};

HomologyResult q_homology(const FinAbGroup& M, int i,
                          size_t entry_cap = 5'000'000);

// A pseudo-normed group: the norm plus an enumerator of closed balls.
struct FilteredGroup {
  FinAbGroup M;
  std::function<Rational(const GroupElem&)> norm;
  std::function<std::vector<GroupElem>(const Rational&)> ball;
};

FilteredGroup finite_filtered(const FinAbGroup& M,
                              std::function<Rational(const GroupElem&)> norm);
FilteredGroup integer_abs_filtered();  // Z with |x|

// norm(0)=0, norm(-m)=norm(m), triangle inequality; finite groups check all
// pairs, infinite ones sample the ball of the probe level.
bool check_pseudonorm(const FilteredGroup& F, const Rational& probe_level);

// The filtered complex uses level c/2^n in degree n, componentwise. Checks
// that d and the homotopy land in the claimed levels for degrees <= n_max;
// target_scale < 1 shrinks only the target level (negative control).
bool filtered_check(const FilteredGroup& F, const Rational& c, int n_max,
                    const Rational& target_scale = Rational(1));

// h^N for N a power of two: the composite homotopy between Q(add) and the sum
// of the N projections, Q_n(M^N) -> Q_{n+1}(M). Recursion
//   h^2 = identify,  h^N = Q(add_{N/2}) . identify + h^{N/2} . sigma_2
// with the middle maps taken over the group M^{N/2}.
QChain homotopy_n_elements(const FinAbGroup& M, size_t N, const QChain& ch);

// Q(f) for the two canonical maps M^K -> M.
QChain sigma_1N(const FinAbGroup& M, size_t K, const QChain& ch);
QChain sigma_2N(const FinAbGroup& M, size_t K, const QChain& ch);

bool verify_homotopy_N(const FinAbGroup& M, size_t N, int n_max);

// Input level 2^{-n} c / N per coordinate, output level 2^{-n-1} c.
bool homotopy_N_filtration(const FilteredGroup& F, size_t N, const Rational& c,
                           int n_max,
                           const Rational& target_scale = Rational(1));

nlohmann::ordered_json qchain_to_json(const QChain& ch);
QChain qchain_from_json(const FinAbGroup& M, const nlohmann::json& j);

}  // namespace ztr
