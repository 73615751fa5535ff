#include "ztr/polyhedral.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace ztr {

namespace {

Rational dot_q(const QVec& phi, const ZVec& x) {
  Rational acc(0);
  for (size_t i = 0; i < phi.size(); ++i)
    if (phi[i] != 0 && x[i] != 0) acc += phi[i] * Rational(x[i]);
  return acc;
}

Integer dot_z(const ZVec& a, const ZVec& b) {
  Integer acc(0);
  for (size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

QVec to_qvec(const ZVec& v) {
  QVec out(v.size());
  for (size_t i = 0; i < v.size(); ++i) out[i] = Rational(v[i]);
  return out;
}

// clear denominators and divide by content
ZVec primitive_z(const QVec& v) {
  Integer l(1);
  for (auto& q : v) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q.get_den_mpz_t());
  ZVec out(v.size());
  Integer g(0);
  for (size_t i = 0; i < v.size(); ++i) {
    Rational s = v[i] * Rational(l);
    out[i] = s.get_num();  // denominator is 1 after scaling
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), out[i].get_mpz_t());
  }
  if (g > 1)
    for (auto& e : out) e /= g;
  return out;
}

bool in_cone(const std::vector<QVec>& constraints, const ZVec& x) {
  for (auto& c : constraints)
    if (dot_q(c, x) < 0) return false;
  return true;
}

bool is_zero_vec(const ZVec& v) {
  for (auto& e : v)
    if (e != 0) return false;
  return true;
}

// exact representability of z over kept, pruning by cone membership; sound
// for pointed cones where the summed constraint functional is positive
bool representable(const ZVec& z, const std::vector<ZVec>& kept,
                   const std::vector<QVec>& constraints,
                   std::map<ZVec, bool>& memo) {
  if (is_zero_vec(z)) return true;
  auto it = memo.find(z);
  if (it != memo.end()) return it->second;
  memo.emplace(z, false);  // cycle guard; overwritten on success
  for (auto& h : kept) {
    ZVec rest(z.size());
    for (size_t i = 0; i < z.size(); ++i) rest[i] = z[i] - h[i];
    if (!in_cone(constraints, rest)) continue;
    if (representable(rest, kept, constraints, memo)) {
      memo[z] = true;
      return true;
    }
  }
  return false;
}

}  // namespace

PolyLattice::PolyLattice(size_t rank, std::vector<QVec> F, std::vector<ZVec> lambdas)
    : k(rank), functionals(std::move(F)), generators(std::move(lambdas)) {
  for (auto& phi : functionals) {
    if (phi.size() != k) throw domain_error("PolyLattice: functional rank mismatch");
    bool found = false;
    for (auto& psi : functionals) {
      bool neg = psi.size() == k;
      for (size_t i = 0; neg && i < k; ++i)
        if (psi[i] != -phi[i]) neg = false;
      if (neg) {
        found = true;
        break;
      }
    }
    if (!found) throw domain_error("PolyLattice: functionals not closed under negation");
  }
  for (auto& l : generators) {
    if (l.size() != k) throw domain_error("PolyLattice: generator rank mismatch");
    if (is_zero_vec(l)) throw domain_error("PolyLattice: zero generator");
  }
  for (size_t c = 0; c < k; ++c) {
    ZVec e(k, Integer(0));
    e[c] = 1;
    if (norm_z(e) <= 0) throw domain_error("PolyLattice: norm not positive on basis");
  }
}

Rational PolyLattice::norm(const QVec& v) const {
  Rational best(0);
  for (auto& phi : functionals) {
    Rational s(0);
    for (size_t i = 0; i < k; ++i) s += phi[i] * v[i];
    if (s > best) best = s;
  }
  return best;
}

Rational PolyLattice::norm_z(const ZVec& v) const { return norm(to_qvec(v)); }

std::vector<ZVec> hilbert_basis(size_t k, const std::vector<QVec>& constraints,
                                size_t box_cap) {
  if (k == 0) return {};
  if (k > 4) throw domain_error("hilbert_basis: rank above 4 unsupported");
  if (constraints.size() > 20) throw budget_exceeded("hilbert_basis: too many constraints");

  // integer constraint rows
  ZMat rows;
  for (auto& c : constraints) {
    if (c.size() != k) throw domain_error("hilbert_basis: covector rank mismatch");
    rows.push_back(primitive_z(c));
  }

  std::vector<ZVec> lineality;
  if (rows.empty()) {
    for (size_t c = 0; c < k; ++c) {
      ZVec e(k, Integer(0));
      e[c] = 1;
      lineality.push_back(e);
    }
  } else {
    lineality = integer_kernel(rows);
  }

  // rational parametrization of the complement of the lineality space
  std::vector<QVec> W;
  if (lineality.empty()) {
    for (size_t c = 0; c < k; ++c) {
      QVec e(k, Rational(0));
      e[c] = 1;
      W.push_back(e);
    }
  } else if (lineality.size() < k) {
    QMat ortho;
    for (auto& b : lineality) ortho.push_back(to_qvec(b));
    W = kernel_basis(ortho);
  }
  size_t kp = W.size();

  std::set<ZVec> rays;
  if (kp > 0 && !constraints.empty()) {
    size_t m = constraints.size();
    for (size_t mask = 0; mask < (size_t(1) << m); ++mask) {
      QMat eq;
      for (size_t j = 0; j < m; ++j) {
        if (!(mask & (size_t(1) << j))) continue;
        QVec row(kp);
        for (size_t t = 0; t < kp; ++t) {
          Rational s(0);
          for (size_t c = 0; c < k; ++c) s += constraints[j][c] * W[t][c];
          row[t] = s;
        }
        eq.push_back(row);
      }
      std::vector<QVec> sol =
          eq.empty() ? (kp == 1 ? std::vector<QVec>{QVec{Rational(1)}} : std::vector<QVec>{})
                     : kernel_basis(eq);
      if (sol.size() != 1) continue;
      QVec x(k, Rational(0));
      for (size_t c = 0; c < k; ++c)
        for (size_t t = 0; t < kp; ++t) x[c] += sol[0][t] * W[t][c];
      ZVec v = primitive_z(x);
      if (is_zero_vec(v)) continue;
      if (in_cone(constraints, v)) {
        rays.insert(v);
      } else {
        ZVec nv(k);
        for (size_t c = 0; c < k; ++c) nv[c] = -v[c];
        if (in_cone(constraints, nv)) rays.insert(nv);
      }
    }
  } else if (kp > 0 && constraints.empty()) {
    // no constraints: all of Z^k, covered by the lineality branch above
  }

  // bounding box: any fractional Caratheodory remainder fits inside the sum
  // of ray and lineality coordinate spans
  std::vector<Integer> R(k, Integer(0));
  for (auto& v : rays)
    for (size_t c = 0; c < k; ++c) R[c] += abs(v[c]);
  for (auto& b : lineality)
    for (size_t c = 0; c < k; ++c) R[c] += abs(b[c]);

  Integer volume(1);
  for (size_t c = 0; c < k; ++c) volume *= 2 * R[c] + 1;
  if (volume > long(box_cap)) throw budget_exceeded("hilbert_basis: fundamental box too large");

  std::vector<ZVec> candidates;
  ZVec cur(k);
  for (size_t c = 0; c < k; ++c) cur[c] = -R[c];
  while (true) {
    if (!is_zero_vec(cur) && in_cone(constraints, cur)) candidates.push_back(cur);
    size_t c = k;
    bool done = true;
    while (c-- > 0) {
      if (++cur[c] <= R[c]) {
        done = false;
        break;
      }
      cur[c] = -R[c];
    }
    if (done) break;
  }

  std::vector<ZVec> out;
  for (auto& b : lineality) {
    out.push_back(b);
    ZVec nb(k);
    for (size_t c = 0; c < k; ++c) nb[c] = -b[c];
    out.push_back(nb);
  }

  if (!lineality.empty()) {
    // no positive functional available; keep the raw fundamental-domain points
    out.insert(out.end(), candidates.begin(), candidates.end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  // pointed cone: reduce towards minimality, ordering by the positive
  // functional sum of constraints
  QVec phi(k, Rational(0));
  for (auto& c : constraints)
    for (size_t i = 0; i < k; ++i) phi[i] += c[i];
  std::sort(candidates.begin(), candidates.end(), [&](const ZVec& a, const ZVec& b) {
    Rational fa = dot_q(phi, a), fb = dot_q(phi, b);
    if (fa != fb) return fa < fb;
    return a < b;
  });
  std::vector<ZVec> kept;
  for (auto& z : candidates) {
    std::map<ZVec, bool> memo;
    if (!representable(z, kept, constraints, memo)) kept.push_back(z);
  }
  out.insert(out.end(), kept.begin(), kept.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool check_generates(size_t k, const std::vector<QVec>& constraints,
                     const std::vector<ZVec>& basis, long box_radius) {
  QVec phi(k, Rational(0));
  for (auto& c : constraints)
    for (size_t i = 0; i < k; ++i) phi[i] += c[i];
  for (auto& h : basis)
    if (!is_zero_vec(h) && dot_q(phi, h) <= 0)
      throw domain_error("check_generates: cone is not pointed");

  ZVec cur(k, Integer(-box_radius));
  while (true) {
    if (in_cone(constraints, cur)) {
      std::map<ZVec, bool> memo;
      if (!representable(cur, basis, constraints, memo)) return false;
    }
    size_t c = k;
    bool done = true;
    while (c-- > 0) {
      if (++cur[c] <= box_radius) {
        done = false;
        break;
      }
      cur[c] = Integer(-box_radius);
    }
    if (done) break;
  }
  return true;
}

std::vector<ZVec> digit_set(const PolyLattice& L, long N, size_t cap) {
  if (N < 1) throw domain_error("digit_set: N must be >= 1");
  if (L.k == 0) return {ZVec{}};
  size_t m = L.generators.size();
  if (m > 8) throw budget_exceeded("digit_set: too many sign cones");
  std::set<ZVec> A;
  A.insert(ZVec(L.k, Integer(0)));
  for (size_t mask = 0; mask < (size_t(1) << m); ++mask) {
    std::vector<QVec> cons;
    for (size_t i = 0; i < m; ++i) {
      QVec row = to_qvec(L.generators[i]);
      if (mask & (size_t(1) << i))
        for (auto& e : row) e = -e;
      cons.push_back(row);
    }
    auto H = hilbert_basis(L.k, cons, cap);
    std::set<ZVec> sums;
    sums.insert(ZVec(L.k, Integer(0)));
    for (auto& y : H) {
      std::set<ZVec> next;
      for (auto& a : sums)
        for (long t = 0; t < N; ++t) {
          ZVec s(L.k);
          for (size_t c = 0; c < L.k; ++c) s[c] = a[c] + t * y[c];
          next.insert(std::move(s));
          if (next.size() > cap) throw budget_exceeded("digit_set: digit alphabet too large");
        }
      sums = std::move(next);
    }
    A.insert(sums.begin(), sums.end());
    if (A.size() > cap) throw budget_exceeded("digit_set: digit alphabet too large");
  }
  return std::vector<ZVec>(A.begin(), A.end());
}

SameSignSplit same_sign_decompose(const PolyLattice& L, const ZVec& x, long N,
                                  const std::vector<ZVec>& A) {
  if (x.size() != L.k) throw domain_error("same_sign_decompose: rank mismatch");
  for (auto& a : A) {
    bool divisible = true;
    ZVec x0(L.k);
    for (size_t c = 0; c < L.k && divisible; ++c) {
      Integer diff = x[c] - a[c];
      if (diff % N != 0) divisible = false;
      else x0[c] = diff / N;
    }
    if (!divisible) continue;
    bool signs_ok = true;
    for (auto& l : L.generators) {
      Integer s0 = dot_z(x0, l);
      Integer s1 = dot_z(a, l);
      if (s0 * s1 < 0) {
        signs_ok = false;
        break;
      }
    }
    if (signs_ok) return SameSignSplit{x0, a};
  }
  throw incomplete_digit_set("same_sign_decompose: no compatible digit");
}

LatticeMeasure::LatticeMeasure(size_t base, long ord, Rational radius, size_t rank)
    : S(base), order(ord), rp(std::move(radius)) {
  if (S < 1 || order < 1) throw domain_error("LatticeMeasure: empty support grid");
  if (rp <= 0 || rp >= 1) throw domain_error("LatticeMeasure: radius must lie in (0,1)");
  x.assign(size_t(order), std::vector<ZVec>(S, ZVec(rank, Integer(0))));
}

Rational measure_nu(const PolyLattice& L, const LatticeMeasure& w, size_t i) {
  Rational acc(0);
  for (long n = 1; n <= w.order; ++n) {
    Rational weight = pow_q(w.rp, n);
    for (size_t s = 0; s < w.S; ++s) {
      Integer v = dot_z(w.x[size_t(n - 1)][s], L.generators[i]);
      acc += Rational(abs(v)) * weight;
    }
  }
  return acc;
}

Rational membership_level(const PolyLattice& L, const LatticeMeasure& w) {
  Rational best(0);
  for (size_t i = 0; i < L.generators.size(); ++i) {
    Rational lev = measure_nu(L, w, i) / L.norm_z(L.generators[i]);
    if (lev > best) best = lev;
  }
  return best;
}

namespace {

// greedy balancing: items in decreasing weight order into the least-loaded
// bin, so every bin ends within one item of the average
size_t least_loaded(const std::vector<Rational>& loads) {
  size_t best = 0;
  for (size_t j = 1; j < loads.size(); ++j)
    if (loads[j] < loads[best]) best = j;
  return best;
}

}  // namespace

KeyDecomposition key_decompose(const PolyLattice& L, const LatticeMeasure& w, long N) {
  if (N < 1) throw domain_error("key_decompose: N must be >= 1");
  auto A = digit_set(L, N);

  KeyDecomposition out{
      std::vector<LatticeMeasure>(size_t(N), LatticeMeasure(w.S, w.order, w.rp, L.k)),
      Rational(0),
      LatticeMeasure(w.S, w.order, w.rp, L.k),
      std::vector<std::vector<ZVec>>(size_t(w.order), std::vector<ZVec>(w.S, ZVec(L.k, Integer(0)))),
      A};

  bool scalar = (L.k == 1);

  // split every coefficient as x = N x0 + digit with per-generator signs
  for (long n = 1; n <= w.order; ++n)
    for (size_t s = 0; s < w.S; ++s) {
      const ZVec& v = w.x[size_t(n - 1)][s];
      ZVec x0(L.k), dig(L.k);
      if (scalar) {
        Integer a = v[0] % N;  // truncated remainder keeps the sign of v
        dig[0] = a;
        x0[0] = (v[0] - a) / N;
      } else {
        auto split = same_sign_decompose(L, v, N, A);
        x0 = split.x0;
        dig = split.digit;
      }
      out.w0.x[size_t(n - 1)][s] = x0;
      out.digit[size_t(n - 1)][s] = dig;
      for (auto& part : out.parts) part.x[size_t(n - 1)][s] = x0;
    }

  if (scalar) {
    // pool unit items and balance them directly: d = 1
    out.d = 1;
    std::vector<Rational> loads(size_t(N), Rational(0));
    for (long n = 1; n <= w.order; ++n) {
      Rational weight = pow_q(w.rp, n);
      for (size_t s = 0; s < w.S; ++s) {
        Integer a = out.digit[size_t(n - 1)][s][0];
        int sign = a < 0 ? -1 : 1;
        for (Integer t = 0; t < abs(a); ++t) {
          size_t j = least_loaded(loads);
          loads[j] += weight;
          out.parts[j].x[size_t(n - 1)][s][0] += sign;
        }
      }
    }
  } else {
    // bin the positions of each digit value separately
    std::map<ZVec, std::vector<std::pair<long, size_t>>> groups;
    for (long n = 1; n <= w.order; ++n)
      for (size_t s = 0; s < w.S; ++s) {
        const ZVec& dig = out.digit[size_t(n - 1)][s];
        if (!is_zero_vec(dig)) groups[dig].push_back({n, s});
      }
    for (auto& [dig, positions] : groups) {
      std::vector<Rational> loads(size_t(N), Rational(0));
      // positions are generated with n ascending, hence weights descending
      for (auto& [n, s] : positions) {
        size_t j = least_loaded(loads);
        loads[j] += pow_q(w.rp, n);
        for (size_t c = 0; c < L.k; ++c) out.parts[j].x[size_t(n - 1)][s][c] += dig[c];
      }
    }
    Rational d(0);
    for (size_t i = 0; i < L.generators.size(); ++i) {
      Rational acc(0);
      for (auto& a : A) acc += Rational(abs(dot_z(a, L.generators[i])));
      if (acc > d) d = acc;
    }
    out.d = d;
  }
  return out;
}

nlohmann::ordered_json lattice_to_json(const PolyLattice& L) {
  nlohmann::ordered_json j;
  j["rank"] = L.k;
  auto fs = nlohmann::ordered_json::array();
  for (auto& phi : L.functionals) {
    auto row = nlohmann::ordered_json::array();
    for (auto& q : phi) row.push_back(to_string(q));
    fs.push_back(row);
  }
  j["functionals"] = fs;
  auto gs = nlohmann::ordered_json::array();
  for (auto& l : L.generators) {
    auto row = nlohmann::ordered_json::array();
    for (auto& e : l) row.push_back(e.get_str());
    gs.push_back(row);
  }
  j["generators"] = gs;
  return j;
}

PolyLattice lattice_from_json(const nlohmann::json& j) {
  size_t k = j.at("rank").get<size_t>();
  std::vector<QVec> F;
  for (auto& row : j.at("functionals")) {
    QVec phi;
    for (auto& s : row) phi.push_back(parse_rational(s.get<std::string>()));
    F.push_back(phi);
  }
  std::vector<ZVec> G;
  for (auto& row : j.at("generators")) {
    ZVec l;
    for (auto& s : row) l.push_back(Integer(s.get<std::string>()));
    G.push_back(l);
  }
  return PolyLattice(k, F, G);
}

}  // namespace ztr
