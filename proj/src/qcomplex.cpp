#include "ztr/qcomplex.hpp"

#include <algorithm>

#include "ztr/linalg.hpp"

namespace ztr {

FinAbGroup::FinAbGroup(std::vector<long> f) : factors(std::move(f)) {
  for (long d : factors)
    if (d != 0 && d < 2) throw domain_error("FinAbGroup: factors must be 0 (infinite) or >= 2");
}

bool FinAbGroup::finite() const {
  for (long d : factors)
    if (d == 0) return false;
  return true;
}

long FinAbGroup::order() const {
  long n = 1;
  for (long d : factors) {
    if (d == 0) throw domain_error("FinAbGroup::order: infinite factor");
    n *= d;
  }
  return n;
}

GroupElem FinAbGroup::reduce(GroupElem e) const {
  if (e.size() != factors.size()) throw domain_error("FinAbGroup: element rank mismatch");
  for (size_t i = 0; i < e.size(); ++i)
    if (factors[i] != 0) e[i] = ((e[i] % factors[i]) + factors[i]) % factors[i];
  return e;
}

GroupElem FinAbGroup::add(const GroupElem& a, const GroupElem& b) const {
  if (a.size() != factors.size() || b.size() != factors.size())
    throw domain_error("FinAbGroup::add: element rank mismatch");
  GroupElem out(a.size());
  for (size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return reduce(std::move(out));
}

GroupElem FinAbGroup::neg(const GroupElem& a) const {
  GroupElem out(a.size());
  for (size_t i = 0; i < a.size(); ++i) out[i] = -a[i];
  return reduce(std::move(out));
}

std::vector<GroupElem> FinAbGroup::elements() const {
  long n = order();
  std::vector<GroupElem> out;
  out.reserve(size_t(n));
  GroupElem cur(factors.size(), 0);
  for (long k = 0; k < n; ++k) {
    out.push_back(cur);
    for (size_t i = factors.size(); i-- > 0;) {
      if (++cur[i] < factors[i]) break;
      cur[i] = 0;
    }
  }
  return out;
}

FinAbGroup FinAbGroup::power(size_t k) const {
  std::vector<long> f;
  f.reserve(factors.size() * k);
  for (size_t i = 0; i < k; ++i) f.insert(f.end(), factors.begin(), factors.end());
  return FinAbGroup(f);
}

void QChain::add_term(const QTuple& t, const Integer& c) {
  if (t.size() != flat_len()) throw domain_error("QChain::add_term: tuple length mismatch");
  if (c == 0) return;
  auto it = terms.find(t);
  if (it == terms.end()) {
    terms.emplace(t, c);
    return;
  }
  it->second += c;
  if (it->second == 0) terms.erase(it);
}

bool QChain::operator==(const QChain& o) const {
  return M == o.M && degree == o.degree && terms == o.terms;
}

QChain qchain_single(const FinAbGroup& M, int degree, const QTuple& t) {
  QChain ch(M, degree);
  QTuple r = t;
  size_t rk = M.grank();
  for (size_t j = 0; j * rk < r.size(); ++j) {
    GroupElem e(r.begin() + j * rk, r.begin() + (j + 1) * rk);
    e = M.reduce(std::move(e));
    std::copy(e.begin(), e.end(), r.begin() + j * rk);
  }
  ch.add_term(r, 1);
  return ch;
}

QChain chain_add(const QChain& a, const QChain& b) {
  if (!(a.M == b.M) || a.degree != b.degree)
    throw domain_error("chain_add: mismatched chains");
  QChain out = a;
  for (auto& [t, c] : b.terms) out.add_term(t, c);
  return out;
}

QChain chain_sub(const QChain& a, const QChain& b) {
  if (!(a.M == b.M) || a.degree != b.degree)
    throw domain_error("chain_sub: mismatched chains");
  QChain out = a;
  for (auto& [t, c] : b.terms) out.add_term(t, -c);
  return out;
}

namespace {

GroupElem tuple_at(const FinAbGroup& M, const QTuple& t, size_t j) {
  size_t rk = M.grank();
  return GroupElem(t.begin() + j * rk, t.begin() + (j + 1) * rk);
}

void tuple_set(const FinAbGroup& M, QTuple& t, size_t j, const GroupElem& e) {
  std::copy(e.begin(), e.end(), t.begin() + j * M.grank());
}

// Pairs positions j and j + half of an M-tuple into an (M x M)-tuple.
QTuple pair_up(const FinAbGroup& M, const QTuple& t, size_t half) {
  size_t rk = M.grank();
  QTuple out(t.size());
  for (size_t j = 0; j < half; ++j) {
    std::copy(t.begin() + j * rk, t.begin() + (j + 1) * rk, out.begin() + j * 2 * rk);
    std::copy(t.begin() + (j + half) * rk, t.begin() + (j + half + 1) * rk,
              out.begin() + j * 2 * rk + rk);
  }
  return out;
}

// Inverse of pair_up: an (M x M)-tuple of length k becomes an M-tuple of
// length 2k with the halves of position j at j and j + k.
QTuple unpair(const FinAbGroup& M, const QTuple& t, size_t k) {
  size_t rk = M.grank();
  QTuple out(t.size());
  for (size_t j = 0; j < k; ++j) {
    std::copy(t.begin() + j * 2 * rk, t.begin() + j * 2 * rk + rk, out.begin() + j * rk);
    std::copy(t.begin() + j * 2 * rk + rk, t.begin() + (j + 1) * 2 * rk,
              out.begin() + (j + k) * rk);
  }
  return out;
}

void dif_tuple(const FinAbGroup& M, int n, const QTuple& t,
               std::map<QTuple, Integer>& acc, const Integer& scale) {
  size_t rk = M.grank();
  if (n == 1) {
    GroupElem a = tuple_at(M, t, 0), b = tuple_at(M, t, 1);
    GroupElem s = M.add(a, b);
    auto bump = [&](const GroupElem& e, int sign) {
      auto it = acc.find(e);
      if (it == acc.end())
        acc.emplace(e, sign * scale);
      else {
        it->second += sign * scale;
        if (it->second == 0) acc.erase(it);
      }
    };
    bump(s, 1);
    bump(a, -1);
    bump(b, -1);
    return;
  }
  size_t half = size_t(1) << (n - 1);
  auto bump = [&](const QTuple& tup, const Integer& c) {
    auto it = acc.find(tup);
    if (it == acc.end())
      acc.emplace(tup, c);
    else {
      it->second += c;
      if (it->second == 0) acc.erase(it);
    }
  };
  // sigma_1: add the paired positions
  QTuple s1(half * rk);
  for (size_t j = 0; j < half; ++j)
    tuple_set(M, s1, j, M.add(tuple_at(M, t, j), tuple_at(M, t, j + half)));
  bump(s1, scale);
  // sigma_2: the two halves as separate tuples
  bump(QTuple(t.begin(), t.begin() + half * rk), -scale);
  bump(QTuple(t.begin() + half * rk, t.end()), -scale);
  // minus the differential over M x M, re-identified: the image tuples carry
  // half/2 components over M x M and unpair to half components over M
  FinAbGroup M2 = M.square();
  std::map<QTuple, Integer> inner;
  dif_tuple(M2, n - 1, pair_up(M, t, half), inner, Integer(1));
  for (auto& [tup, c] : inner) bump(unpair(M, tup, half / 2), -scale * c);
}

}  // namespace

QChain q_differential(const QChain& ch) {
  if (ch.degree < 1) throw domain_error("q_differential: degree must be >= 1");
  QChain out(ch.M, ch.degree - 1);
  for (auto& [t, c] : ch.terms) dif_tuple(ch.M, ch.degree, t, out.terms, c);
  return out;
}

QChain q_sigma(SigmaKind kind, const FinAbGroup& G, const QChain& ch) {
  if (!(ch.M == G.square())) throw domain_error("q_sigma: chain must live over G x G");
  QChain out(G, ch.degree);
  size_t rk = G.grank();
  size_t comps = ch.components();
  for (auto& [t, c] : ch.terms) {
    if (kind == SigmaKind::Sum) {
      QTuple s(comps * rk);
      for (size_t j = 0; j < comps; ++j) {
        GroupElem a(t.begin() + j * 2 * rk, t.begin() + j * 2 * rk + rk);
        GroupElem b(t.begin() + j * 2 * rk + rk, t.begin() + (j + 1) * 2 * rk);
        tuple_set(G, s, j, G.add(a, b));
      }
      out.add_term(s, c);
    } else {
      QTuple p1(comps * rk), p2(comps * rk);
      for (size_t j = 0; j < comps; ++j) {
        std::copy(t.begin() + j * 2 * rk, t.begin() + j * 2 * rk + rk, p1.begin() + j * rk);
        std::copy(t.begin() + j * 2 * rk + rk, t.begin() + (j + 1) * 2 * rk,
                  p2.begin() + j * rk);
      }
      out.add_term(p1, c);
      out.add_term(p2, c);
    }
  }
  return out;
}

QChain q_identify(const FinAbGroup& G, const QChain& ch) {
  if (!(ch.M == G.square())) throw domain_error("q_identify: chain must live over G x G");
  QChain out(G, ch.degree + 1);
  size_t comps = ch.components();
  for (auto& [t, c] : ch.terms) out.add_term(unpair(G, t, comps), c);
  return out;
}

namespace {

// every tuple of `len` elements drawn from a list
template <typename F>
void for_all_tuples(const std::vector<GroupElem>& pool, size_t len, size_t rk, F&& fn) {
  std::vector<size_t> idx(len, 0);
  QTuple flat(len * rk);
  while (true) {
    for (size_t j = 0; j < len; ++j)
      std::copy(pool[idx[j]].begin(), pool[idx[j]].end(), flat.begin() + j * rk);
    fn(flat);
    size_t j = len;
    while (j-- > 0) {
      if (++idx[j] < pool.size()) break;
      idx[j] = 0;
      if (j == 0) return;
    }
  }
}

}  // namespace

bool verify_homotopy(const FinAbGroup& M, int n_max) {
  FinAbGroup M2 = M.square();
  auto pool = M2.elements();
  for (int n = 0; n <= n_max; ++n) {
    bool ok = true;
    for_all_tuples(pool, size_t(1) << n, M2.grank(), [&](const QTuple& t) {
      if (!ok) return;
      QChain z = qchain_single(M2, n, t);
      QChain lhs = chain_sub(q_sigma(SigmaKind::Sum, M, z), q_sigma(SigmaKind::Split, M, z));
      QChain rhs = q_differential(q_identify(M, z));
      if (n >= 1) rhs = chain_add(rhs, q_identify(M, q_differential(z)));
      if (!(lhs == rhs)) ok = false;
    });
    if (!ok) return false;
  }
  return true;
}

bool verify_dd_zero(const FinAbGroup& M, int n_max) {
  auto pool = M.elements();
  for (int n = 2; n <= n_max; ++n) {
    bool ok = true;
    for_all_tuples(pool, size_t(1) << n, M.grank(), [&](const QTuple& t) {
      if (!ok) return;
      QChain dd = q_differential(q_differential(qchain_single(M, n, t)));
      if (!dd.is_zero()) ok = false;
    });
    if (!ok) return false;
  }
  return true;
}

namespace {

size_t tuple_index(const FinAbGroup& M, const QTuple& t) {
  size_t idx = 0;
  size_t rk = M.grank();
  for (size_t i = 0; i < t.size(); ++i) idx = idx * size_t(M.factors[i % rk]) + size_t(t[i]);
  return idx;
}

// dense integer matrix of d_n : Q_n -> Q_{n-1}
ZMat differential_matrix(const FinAbGroup& M, int n) {
  size_t rk = M.grank();
  long ord = M.order();
  size_t cols = 1, rows = 1;
  for (size_t j = 0; j < (size_t(1) << n); ++j) cols *= size_t(ord);
  for (size_t j = 0; j < (size_t(1) << (n - 1)); ++j) rows *= size_t(ord);
  ZMat A(rows, ZVec(cols, Integer(0)));
  auto pool = M.elements();
  size_t col = 0;
  for_all_tuples(pool, size_t(1) << n, rk, [&](const QTuple& t) {
    std::map<QTuple, Integer> image;
    dif_tuple(M, n, t, image, Integer(1));
    for (auto& [tup, c] : image) A[tuple_index(M, tup)][col] += c;
    ++col;
  });
  return A;
}

}  // namespace

std::vector<Integer> HomologyResult::divisor_list() const {
  std::vector<Integer> out = torsion;
  for (long i = 0; i < free_rank; ++i) out.push_back(0);
  return out;
}

HomologyResult q_homology(const FinAbGroup& M, int i, size_t entry_cap) {
  long ord = M.order();
  auto dim = [&](int k) {
    size_t d = 1;
    for (size_t j = 0; j < (size_t(1) << k); ++j) {
      d *= size_t(ord);
      if (d > entry_cap) throw budget_exceeded("q_homology: basis too large");
    }
    return d;
  };
  size_t n_i = dim(i);
  size_t n_next = dim(i + 1);
  if (n_i * n_next > entry_cap) throw budget_exceeded("q_homology: boundary matrix too large");

  size_t rank_d_i = 0;
  if (i >= 1) {
    ZMat A = differential_matrix(M, i);
    QMat Aq(A.size(), QVec(A[0].size()));
    for (size_t r = 0; r < A.size(); ++r)
      for (size_t c = 0; c < A[r].size(); ++c) Aq[r][c] = Rational(A[r][c]);
    rank_d_i = rank(std::move(Aq));
  }
  ZMat B = differential_matrix(M, i + 1);
  auto divisors = smith_divisors(std::move(B));
  HomologyResult res;
  res.free_rank = long(n_i) - long(rank_d_i) - long(divisors.size());
  for (auto& d : divisors)
    if (d > 1) res.torsion.push_back(d);
  std::sort(res.torsion.begin(), res.torsion.end());
  return res;
}

FilteredGroup finite_filtered(const FinAbGroup& M,
                              std::function<Rational(const GroupElem&)> norm) {
  if (!M.finite()) throw domain_error("finite_filtered: group must be finite");
  FilteredGroup F{M, norm, nullptr};
  F.ball = [M, norm](const Rational& level) {
    std::vector<GroupElem> out;
    for (auto& e : M.elements())
      if (norm(e) <= level) out.push_back(e);
    return out;
  };
  return F;
}

FilteredGroup integer_abs_filtered() {
  FinAbGroup Z(std::vector<long>{0});
  FilteredGroup F{Z, nullptr, nullptr};
  F.norm = [](const GroupElem& e) {
    return Rational(e[0] < 0 ? -e[0] : e[0]);
  };
  F.ball = [](const Rational& level) {
    std::vector<GroupElem> out;
    if (level < 0) return out;
    Integer fl = level.get_num() / level.get_den();
    long n = long(fl.get_si());
    for (long x = -n; x <= n; ++x) out.push_back(GroupElem{x});
    return out;
  };
  return F;
}

bool check_pseudonorm(const FilteredGroup& F, const Rational& probe_level) {
  std::vector<GroupElem> pool =
      F.M.finite() ? F.M.elements() : F.ball(probe_level);
  GroupElem z = F.M.zero();
  if (F.norm(z) != 0) return false;
  for (auto& a : pool) {
    if (F.norm(F.M.neg(a)) != F.norm(a)) return false;
    for (auto& b : pool)
      if (F.norm(F.M.add(a, b)) > F.norm(a) + F.norm(b)) return false;
  }
  return true;
}

namespace {

bool tuple_within(const FilteredGroup& F, const QTuple& t, const Rational& level) {
  size_t rk = F.M.grank();
  for (size_t j = 0; j * rk < t.size(); ++j) {
    GroupElem e(t.begin() + j * rk, t.begin() + (j + 1) * rk);
    if (F.norm(e) > level) return false;
  }
  return true;
}

}  // namespace

bool filtered_check(const FilteredGroup& F, const Rational& c, int n_max,
                    const Rational& target_scale) {
  const FinAbGroup& M = F.M;
  size_t rk = M.grank();
  // differentials: degree n level c/2^n into degree n-1 level c/2^{n-1}
  for (int n = 1; n <= n_max; ++n) {
    Rational lev_in = c / pow_q(Rational(2), n);
    Rational lev_out = (c / pow_q(Rational(2), n - 1)) * target_scale;
    auto pool = F.ball(lev_in);
    if (pool.empty()) continue;
    bool ok = true;
    for_all_tuples(pool, size_t(1) << n, rk, [&](const QTuple& t) {
      if (!ok) return;
      QChain d = q_differential(qchain_single(M, n, t));
      for (auto& [tup, coeff] : d.terms) {
        (void)coeff;
        if (!tuple_within(F, tup, lev_out)) ok = false;
      }
    });
    if (!ok) return false;
  }
  // the homotopy: degree n over M x M at level c/2^{n+1} per coordinate lands
  // in degree n+1 at level c/2^{n+1}
  for (int n = 0; n < n_max; ++n) {
    Rational lev = c / pow_q(Rational(2), n + 1);
    Rational lev_out = lev * target_scale;
    auto pool1 = F.ball(lev);
    if (pool1.empty()) continue;
    // assemble M x M elements with both halves in the ball
    std::vector<GroupElem> pool2;
    for (auto& a : pool1)
      for (auto& b : pool1) {
        GroupElem e = a;
        e.insert(e.end(), b.begin(), b.end());
        pool2.push_back(e);
      }
    FinAbGroup M2 = M.square();
    bool ok = true;
    for_all_tuples(pool2, size_t(1) << n, M2.grank(), [&](const QTuple& t) {
      if (!ok) return;
      QChain h = q_identify(M, qchain_single(M2, n, t));
      for (auto& [tup, coeff] : h.terms) {
        (void)coeff;
        if (!tuple_within(F, tup, lev_out)) ok = false;
      }
    });
    if (!ok) return false;
  }
  return true;
}

QChain sigma_1N(const FinAbGroup& M, size_t K, const QChain& ch) {
  if (!(ch.M == M.power(K))) throw domain_error("sigma_1N: chain must live over M^K");
  QChain out(M, ch.degree);
  size_t rk = M.grank();
  size_t comps = ch.components();
  for (auto& [t, c] : ch.terms) {
    QTuple s(comps * rk);
    for (size_t j = 0; j < comps; ++j) {
      GroupElem acc = M.zero();
      for (size_t i = 0; i < K; ++i) {
        GroupElem e(t.begin() + (j * K + i) * rk, t.begin() + (j * K + i + 1) * rk);
        acc = M.add(acc, e);
      }
      tuple_set(M, s, j, acc);
    }
    out.add_term(s, c);
  }
  return out;
}

QChain sigma_2N(const FinAbGroup& M, size_t K, const QChain& ch) {
  if (!(ch.M == M.power(K))) throw domain_error("sigma_2N: chain must live over M^K");
  QChain out(M, ch.degree);
  size_t rk = M.grank();
  size_t comps = ch.components();
  for (auto& [t, c] : ch.terms) {
    for (size_t i = 0; i < K; ++i) {
      QTuple s(comps * rk);
      for (size_t j = 0; j < comps; ++j)
        std::copy(t.begin() + (j * K + i) * rk, t.begin() + (j * K + i + 1) * rk,
                  s.begin() + j * rk);
      out.add_term(s, c);
    }
  }
  return out;
}

QChain homotopy_n_elements(const FinAbGroup& M, size_t N, const QChain& ch) {
  if (N < 2 || (N & (N - 1)) != 0)
    throw domain_error("homotopy_n_elements: N must be a power of two >= 2");
  if (!(ch.M == M.power(N)))
    throw domain_error("homotopy_n_elements: chain must live over M^N");
  if (N == 2) return q_identify(M, ch);
  FinAbGroup G = M.power(N / 2);
  // view M^N as G x G, splitting each block into its two halves
  QChain over_g2(G.square(), ch.degree);
  over_g2.terms = ch.terms;
  QChain term1 = sigma_1N(M, N / 2, q_identify(G, over_g2));
  QChain split = q_sigma(SigmaKind::Split, G, over_g2);
  QChain term2 = homotopy_n_elements(M, N / 2, split);
  return chain_add(term1, term2);
}

bool verify_homotopy_N(const FinAbGroup& M, size_t N, int n_max) {
  FinAbGroup MN = M.power(N);
  auto pool = MN.elements();
  for (int n = 0; n <= n_max; ++n) {
    bool ok = true;
    for_all_tuples(pool, size_t(1) << n, MN.grank(), [&](const QTuple& t) {
      if (!ok) return;
      QChain z = qchain_single(MN, n, t);
      QChain lhs = chain_sub(sigma_1N(M, N, z), sigma_2N(M, N, z));
      QChain rhs = q_differential(homotopy_n_elements(M, N, z));
      if (n >= 1) rhs = chain_add(rhs, homotopy_n_elements(M, N, q_differential(z)));
      if (!(lhs == rhs)) ok = false;
    });
    if (!ok) return false;
  }
  return true;
}

bool homotopy_N_filtration(const FilteredGroup& F, size_t N, const Rational& c,
                           int n_max, const Rational& target_scale) {
  const FinAbGroup& M = F.M;
  FinAbGroup MN = M.power(N);
  for (int n = 0; n <= n_max; ++n) {
    Rational lev_in = c / (pow_q(Rational(2), n) * Rational(long(N)));
    Rational lev_out = (c / pow_q(Rational(2), n + 1)) * target_scale;
    auto pool1 = F.ball(lev_in);
    if (pool1.empty()) continue;
    // M^N blocks with every coordinate in the ball
    std::vector<GroupElem> blocks;
    std::vector<size_t> idx(N, 0);
    while (true) {
      GroupElem e;
      for (size_t i = 0; i < N; ++i) e.insert(e.end(), pool1[idx[i]].begin(), pool1[idx[i]].end());
      blocks.push_back(e);
      size_t i = N;
      bool done = true;
      while (i-- > 0) {
        if (++idx[i] < pool1.size()) {
          done = false;
          break;
        }
        idx[i] = 0;
      }
      if (done) break;
    }
    bool ok = true;
    for_all_tuples(blocks, size_t(1) << n, MN.grank(), [&](const QTuple& t) {
      if (!ok) return;
      QChain h = homotopy_n_elements(M, N, qchain_single(MN, n, t));
      for (auto& [tup, coeff] : h.terms) {
        (void)coeff;
        if (!tuple_within(F, tup, lev_out)) ok = false;
      }
    });
    if (!ok) return false;
  }
  return true;
}

nlohmann::ordered_json qchain_to_json(const QChain& ch) {
  nlohmann::ordered_json j;
  j["degree"] = ch.degree;
  j["factors"] = ch.M.factors;
  auto terms = nlohmann::ordered_json::array();
  for (auto& [t, c] : ch.terms) {
    nlohmann::ordered_json row = nlohmann::ordered_json::array();
    row.push_back(t);
    row.push_back(c.get_str());
    terms.push_back(row);
  }
  j["terms"] = terms;
  return j;
}

QChain qchain_from_json(const FinAbGroup& M, const nlohmann::json& j) {
  QChain ch(M, j.at("degree").get<int>());
  for (auto& row : j.at("terms")) {
    QTuple t = row.at(0).get<QTuple>();
    Integer c(row.at(1).get<std::string>());
    ch.add_term(t, c);
  }
  return ch;
}

}  // namespace ztr
