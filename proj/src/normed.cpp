#include "ztr/normed.hpp"

#include <algorithm>
#include <map>

namespace ztr {

namespace {

// weighted layer of a norm with every quotient stage flattened into one
// column block: eval(x) = || G (x - F u) || minimized over u
struct Flat {
  NormKind kind;
  std::vector<Rational> w;
  QMat G;  // empty = identity
  QMat F;  // dim rows, zero or more columns
  size_t dim;
};

QMat hcat(const QMat& a, const QMat& b, size_t rows) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  QMat out = a;
  for (size_t i = 0; i < rows; ++i)
    out[i].insert(out[i].end(), b[i].begin(), b[i].end());
  return out;
}

size_t cols_of(const QMat& a) { return a.empty() ? 0 : a[0].size(); }

QVec col_of(const QMat& a, size_t j) {
  QVec v(a.size());
  for (size_t i = 0; i < a.size(); ++i) v[i] = a[i][j];
  return v;
}

bool vec_zero(const QVec& v) {
  for (const auto& x : v)
    if (x != 0) return false;
  return true;
}

QVec vec_sub(const QVec& a, const QVec& b) {
  QVec out(a.size());
  for (size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

bool mat_eq(const QMat& a, const QMat& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i].size() != b[i].size()) return false;
    for (size_t j = 0; j < a[i].size(); ++j)
      if (a[i][j] != b[i][j]) return false;
  }
  return true;
}

Flat flatten(const Norm& n) {
  if (!n.quotient_base) return {n.kind, n.weights, n.G, QMat{}, n.dim()};
  Flat base = flatten(*n.quotient_base);
  base.F = hcat(n.F, base.F, base.dim);
  return base;
}

Rational weighted_value(const Flat& fl, const QVec& x) {
  QVec v = fl.G.empty() ? x : mat_apply(fl.G, x);
  Rational out = 0;
  if (fl.kind == NormKind::L1W) {
    for (size_t i = 0; i < v.size(); ++i) out += fl.w[i] * abs_q(v[i]);
  } else {
    for (size_t i = 0; i < v.size(); ++i) out = std::max(out, Rational(fl.w[i] * abs_q(v[i])));
  }
  return out;
}

}  // namespace

Norm Norm::l1(std::vector<Rational> w) {
  Norm n;
  n.kind = NormKind::L1W;
  n.weights = std::move(w);
  return n;
}

Norm Norm::linf(std::vector<Rational> w) {
  Norm n;
  n.kind = NormKind::LinfW;
  n.weights = std::move(w);
  return n;
}

Norm Norm::with_pullback(QMat g) const {
  if (quotient_base) throw domain_error("pullback on a quotient norm is not supported");
  Norm n = *this;
  n.G = std::move(g);
  return n;
}

Norm Norm::quotient(Norm base, QMat f) {
  Norm n;
  n.quotient_base = std::make_shared<const Norm>(std::move(base));
  n.F = std::move(f);
  return n;
}

size_t Norm::dim() const {
  if (quotient_base) return quotient_base->dim();
  if (!G.empty()) return G[0].size();
  return weights.size();
}

void Norm::validate() const {
  if (quotient_base) {
    quotient_base->validate();
    size_t d = quotient_base->dim();
    if (!F.empty()) {
      if (F.size() != d) throw domain_error("quotient embedding row count mismatch");
      size_t c = F[0].size();
      for (const auto& row : F)
        if (row.size() != c) throw domain_error("ragged quotient embedding");
    }
    return;
  }
  if (weights.empty() && !G.empty()) throw domain_error("pullback without weights");
  for (const auto& w : weights)
    if (w <= 0) throw domain_error("norm weights must be positive");
  if (!G.empty()) {
    if (G.size() != weights.size()) throw domain_error("pullback row count mismatch");
    for (const auto& row : G)
      if (row.size() != weights.size()) throw domain_error("pullback must be square");
    if (rank(G) != G.size()) throw domain_error("pullback must be invertible");
  }
}

Rational defect_min(const Norm& n, const QVec& target, const QMat& D) {
  Flat fl = flatten(n);
  if (target.size() != fl.dim) throw domain_error("defect target dimension mismatch");
  QMat C = hcat(D, fl.F, fl.dim);
  size_t nc = cols_of(C);
  if (nc == 0) return weighted_value(fl, target);

  QVec q = fl.G.empty() ? target : mat_apply(fl.G, target);
  QMat P = fl.G.empty() ? C : mat_mul(fl.G, C);
  size_t rows = fl.w.size();

  QMat A;
  QVec b, c;
  if (fl.kind == NormKind::L1W) {
    // variables [z, t], |q - P z|_i <= t_i, minimize sum w_i t_i
    for (size_t i = 0; i < rows; ++i) {
      QVec r1(nc + rows, Rational(0)), r2(nc + rows, Rational(0));
      for (size_t j = 0; j < nc; ++j) {
        r1[j] = -P[i][j];
        r2[j] = P[i][j];
      }
      r1[nc + i] = -1;
      r2[nc + i] = -1;
      A.push_back(std::move(r1));
      b.push_back(-q[i]);
      A.push_back(std::move(r2));
      b.push_back(q[i]);
    }
    c.assign(nc + rows, Rational(0));
    for (size_t i = 0; i < rows; ++i) c[nc + i] = fl.w[i];
  } else {
    // variables [z, s], w_i |q - P z|_i <= s, minimize s
    for (size_t i = 0; i < rows; ++i) {
      QVec r1(nc + 1, Rational(0)), r2(nc + 1, Rational(0));
      for (size_t j = 0; j < nc; ++j) {
        r1[j] = -fl.w[i] * P[i][j];
        r2[j] = fl.w[i] * P[i][j];
      }
      r1[nc] = -1;
      r2[nc] = -1;
      A.push_back(std::move(r1));
      b.push_back(-fl.w[i] * q[i]);
      A.push_back(std::move(r2));
      b.push_back(fl.w[i] * q[i]);
    }
    c.assign(nc + 1, Rational(0));
    c[nc] = 1;
  }
  auto res = lp_minimize(A, b, c);
  if (!res) throw domain_error("defect LP unbounded");
  return res->value < 0 ? Rational(0) : res->value;
}

Rational Norm::eval(const QVec& x) const {
  if (!quotient_base) {
    Flat fl{kind, weights, G, QMat{}, dim()};
    return weighted_value(fl, x);
  }
  return defect_min(*this, x, QMat{});
}

std::vector<QVec> ball_vertices(const Norm& n) {
  if (n.quotient_base) return ball_vertices(*n.quotient_base);
  size_t d = n.weights.size();
  std::vector<QVec> out;
  if (d == 0) return out;
  auto pull = [&](const QVec& rhs) -> QVec {
    if (n.G.empty()) return rhs;
    auto sol = solve(n.G, rhs);
    if (!sol) throw domain_error("singular pullback in ball_vertices");
    return *sol;
  };
  if (n.kind == NormKind::L1W) {
    for (size_t j = 0; j < d; ++j) {
      QVec rhs(d, Rational(0));
      rhs[j] = Rational(1) / n.weights[j];
      out.push_back(pull(rhs));
      rhs[j] = -rhs[j];
      out.push_back(pull(rhs));
    }
  } else {
    if (d > 16) throw budget_exceeded("max-norm vertex enumeration too large");
    for (size_t mask = 0; mask < (size_t(1) << d); ++mask) {
      QVec rhs(d);
      for (size_t j = 0; j < d; ++j)
        rhs[j] = (mask >> j & 1 ? Rational(1) : Rational(-1)) / n.weights[j];
      out.push_back(pull(rhs));
    }
  }
  return out;
}

Rational op_norm(const QMat& A, const Norm& from, const Norm& to) {
  if (from.quotient_base) {
    // the map has to descend to the quotient for the sup to make sense
    Flat fl = flatten(from);
    for (size_t j = 0; j < cols_of(fl.F); ++j)
      if (to.eval(mat_apply(A, col_of(fl.F, j))) != 0)
        throw domain_error("operator does not descend to the quotient");
  }
  Rational best = 0;
  for (const auto& v : ball_vertices(from))
    best = std::max(best, to.eval(mat_apply(A, v)));
  return best;
}

std::optional<Rational> sup_ratio(const QMat& R, const QMat& F, const Norm& num,
                                  const Norm& den) {
  if (num.quotient_base || den.quotient_base)
    throw domain_error("sup_ratio needs weighted norms");
  size_t n = cols_of(F);
  if (cols_of(R) != n && !(R.empty() && n == 0))
    throw domain_error("sup_ratio shape mismatch");
  for (const auto& v : kernel_basis(F))
    if (!vec_zero(mat_apply(R, v))) return std::nullopt;

  // complement of ker F: standard basis columns on which F gains rank
  std::vector<size_t> sel;
  size_t cur = 0;
  for (size_t j = 0; j < n; ++j) {
    QMat sub(F.size());
    for (size_t i = 0; i < F.size(); ++i) {
      for (size_t s : sel) sub[i].push_back(F[i][s]);
      sub[i].push_back(F[i][j]);
    }
    size_t r = rank(sub);
    if (r > cur) {
      sel.push_back(j);
      cur = r;
    }
  }
  if (sel.empty()) return Rational(0);  // F = 0 and R vanishes on everything

  auto select_cols = [&](const QMat& M) {
    QMat out(M.size());
    for (size_t i = 0; i < M.size(); ++i)
      for (size_t s : sel) out[i].push_back(M[i][s]);
    return out;
  };
  QMat FW = select_cols(F), RW = select_cols(R);
  QMat DW = den.G.empty() ? FW : mat_mul(den.G, FW);
  QMat NW = num.G.empty() ? RW : mat_mul(num.G, RW);
  size_t rows_d = den.weights.size(), rows_n = num.weights.size();

  QMat A;
  QVec b;
  if (den.kind == NormKind::L1W) {
    if (rows_d > 14) throw budget_exceeded("l1 dual enumeration too large");
    for (size_t mask = 0; mask < (size_t(1) << rows_d); ++mask) {
      QVec row(sel.size(), Rational(0));
      for (size_t i = 0; i < rows_d; ++i) {
        Rational s = (mask >> i & 1) ? den.weights[i] : -den.weights[i];
        for (size_t j = 0; j < sel.size(); ++j) row[j] += s * DW[i][j];
      }
      A.push_back(std::move(row));
      b.push_back(Rational(1));
    }
  } else {
    for (size_t i = 0; i < rows_d; ++i) {
      QVec r1(sel.size()), r2(sel.size());
      for (size_t j = 0; j < sel.size(); ++j) {
        r1[j] = den.weights[i] * DW[i][j];
        r2[j] = -r1[j];
      }
      A.push_back(std::move(r1));
      b.push_back(Rational(1));
      A.push_back(std::move(r2));
      b.push_back(Rational(1));
    }
  }

  std::vector<QVec> functionals;
  if (num.kind == NormKind::L1W) {
    if (rows_n > 14) throw budget_exceeded("l1 functional enumeration too large");
    for (size_t mask = 0; mask < (size_t(1) << rows_n); ++mask) {
      QVec phi(sel.size(), Rational(0));
      for (size_t i = 0; i < rows_n; ++i) {
        Rational s = (mask >> i & 1) ? num.weights[i] : -num.weights[i];
        for (size_t j = 0; j < sel.size(); ++j) phi[j] += s * NW[i][j];
      }
      functionals.push_back(std::move(phi));
    }
  } else {
    for (size_t i = 0; i < rows_n; ++i) {
      QVec p1(sel.size()), p2(sel.size());
      for (size_t j = 0; j < sel.size(); ++j) {
        p1[j] = num.weights[i] * NW[i][j];
        p2[j] = -p1[j];
      }
      functionals.push_back(std::move(p1));
      functionals.push_back(std::move(p2));
    }
  }

  Rational best = 0;
  for (const auto& phi : functionals) {
    QVec c(phi.size());
    for (size_t j = 0; j < phi.size(); ++j) c[j] = -phi[j];
    auto res = lp_minimize(A, b, c);
    if (!res) return std::nullopt;  // unbounded ratio
    best = std::max(best, Rational(-res->value));
  }
  return best;
}

void AdmissibleSystem::validate() const {
  if (levels.size() != complexes.size() || levels.empty())
    throw domain_error("level grid and complex count differ");
  for (size_t l = 0; l + 1 < levels.size(); ++l)
    if (levels[l + 1] <= levels[l]) throw domain_error("levels must ascend");
  if (res.size() + 1 != levels.size()) throw domain_error("one res block per adjacent pair");

  for (size_t l = 0; l < complexes.size(); ++l) {
    const auto& cx = complexes[l];
    if (cx.spaces.size() != complexes[0].spaces.size())
      throw domain_error("ragged degree count across levels");
    if (cx.d.size() + 1 != cx.spaces.size()) throw domain_error("need one d per adjacent degree");
    for (size_t i = 0; i < cx.spaces.size(); ++i) {
      cx.spaces[i].norm.validate();
      if (cx.spaces[i].norm.dim() != cx.spaces[i].dim) throw domain_error("norm dimension mismatch");
    }
    for (size_t i = 0; i + 1 < cx.spaces.size(); ++i) {
      const QMat& d = cx.d[i];
      if (d.size() != cx.spaces[i + 1].dim || (cx.spaces[i].dim > 0 && cols_of(d) != cx.spaces[i].dim))
        if (!(d.empty() && cx.spaces[i + 1].dim == 0))
          throw domain_error("differential shape mismatch");
      if (cx.spaces[i].dim > 0 && cx.spaces[i + 1].dim > 0 &&
          op_norm(d, cx.spaces[i].norm, cx.spaces[i + 1].norm) > 1)
        throw domain_error("differential must be norm-nonincreasing");
      if (i + 2 < cx.spaces.size() && cx.spaces[i].dim > 0 && cx.spaces[i + 2].dim > 0 &&
          cx.spaces[i + 1].dim > 0) {
        QMat dd = mat_mul(cx.d[i + 1], d);
        for (const auto& row : dd)
          for (const auto& e : row)
            if (e != 0) throw domain_error("d after d is nonzero");
      }
    }
  }
  for (size_t l = 0; l + 1 < levels.size(); ++l) {
    const auto& lo = complexes[l];
    const auto& hi = complexes[l + 1];
    if (res[l].size() != lo.spaces.size()) throw domain_error("res degree count mismatch");
    for (size_t i = 0; i < lo.spaces.size(); ++i) {
      const QMat& r = res[l][i];
      if (lo.spaces[i].dim == 0 || hi.spaces[i].dim == 0) continue;
      if (r.size() != lo.spaces[i].dim || cols_of(r) != hi.spaces[i].dim)
        throw domain_error("res shape mismatch");
      if (op_norm(r, hi.spaces[i].norm, lo.spaces[i].norm) > 1)
        throw domain_error("res must be norm-nonincreasing");
      if (i + 1 < lo.spaces.size() && lo.spaces[i + 1].dim > 0 && hi.spaces[i + 1].dim > 0) {
        if (!mat_eq(mat_mul(res[l][i + 1], hi.d[i]), mat_mul(lo.d[i], r)))
          throw domain_error("res does not commute with d");
      }
    }
  }
}

QMat AdmissibleSystem::res_between(size_t hi, size_t lo, size_t degree) const {
  if (hi < lo) throw domain_error("res_between goes downward");
  QMat out = mat_identity(complexes[hi].spaces[degree].dim);
  for (size_t l = hi; l > lo; --l) out = mat_mul(res[l - 1][degree], out);
  return out;
}

namespace {

std::vector<QVec> exactness_probes(const LevelComplex& cx, size_t degree, size_t random_probes,
                                   Rng& rng) {
  size_t dim = cx.spaces[degree].dim;
  std::vector<QVec> probes;
  for (size_t j = 0; j < dim; ++j) {
    QVec e(dim, Rational(0));
    e[j] = 1;
    probes.push_back(std::move(e));
  }
  if (degree + 1 < cx.spaces.size() && dim > 0 && cx.spaces[degree + 1].dim > 0)
    for (auto& v : kernel_basis(cx.d[degree])) probes.push_back(std::move(v));
  for (size_t t = 0; t < random_probes; ++t) {
    QVec v(dim);
    bool nz = false;
    for (size_t j = 0; j < dim; ++j) {
      v[j] = Rational(long(rng.range(-3, 3)));
      nz = nz || v[j] != 0;
    }
    if (nz) probes.push_back(std::move(v));
  }
  return probes;
}

}  // namespace

KExactReport check_k_exact(const AdmissibleSystem& sys, const Rational& k, int m,
                           const Rational& c0, size_t random_probes, Rng& rng) {
  KExactReport rep;
  if (m < 0) return rep;
  bool found_pair = false;
  size_t degrees = sys.complexes.empty() ? 0 : sys.complexes[0].spaces.size();
  for (size_t lo = 0; lo < sys.levels.size(); ++lo) {
    if (sys.levels[lo] < c0) continue;
    for (size_t hi = lo; hi < sys.levels.size(); ++hi) {
      if (sys.levels[hi] != k * sys.levels[lo]) continue;
      found_pair = true;
      for (size_t deg = 0; deg < degrees && deg <= size_t(m); ++deg) {
        const auto& chi = sys.complexes[hi];
        const auto& clo = sys.complexes[lo];
        if (chi.spaces[deg].dim == 0) continue;
        KExactRow row;
        row.level_hi = hi;
        row.level_lo = lo;
        row.degree = deg;
        row.worst_excess = 0;
        QMat down = sys.res_between(hi, lo, deg);
        QMat prev = deg > 0 && clo.spaces[deg - 1].dim > 0 ? clo.d[deg - 1] : QMat{};
        bool has_next = deg + 1 < degrees && chi.spaces[deg + 1].dim > 0;
        for (const auto& x : exactness_probes(chi, deg, random_probes, rng)) {
          if (vec_zero(x)) continue;
          Rational defect = defect_min(clo.spaces[deg].norm, mat_apply(down, x), prev);
          Rational rhs = 0;
          if (has_next) rhs = k * chi.spaces[deg + 1].norm.eval(mat_apply(chi.d[deg], x));
          ++row.probes;
          if (defect > rhs) {
            ++row.violations;
            row.worst_excess = std::max(row.worst_excess, Rational(defect - rhs));
          }
          double ratio = rhs > 0 ? double(to_ld(defect / rhs))
                                 : (defect > 0 ? 1e300 : 0.0);
          row.worst_ratio = std::max(row.worst_ratio, ratio);
        }
        rep.total_probes += row.probes;
        rep.total_violations += row.violations;
        rep.worst_ratio = std::max(rep.worst_ratio, row.worst_ratio);
        rep.rows.push_back(std::move(row));
      }
    }
  }
  if (!found_pair) throw grid_mismatch("no level pair at ratio k above c0");
  rep.violation_found = rep.total_violations > 0;
  return rep;
}

AdmissibleSystem quotient_system(const AdmissibleSystem& mp,
                                 const std::vector<std::vector<QMat>>& f) {
  AdmissibleSystem n = mp;
  for (size_t l = 0; l < n.complexes.size(); ++l)
    for (size_t i = 0; i < n.complexes[l].spaces.size(); ++i)
      n.complexes[l].spaces[i].norm =
          Norm::quotient(mp.complexes[l].spaces[i].norm, f[l][i]);
  return n;
}

SnakeOutcome snake_quotient_check(const AdmissibleSystem& m_sys,
                                  const AdmissibleSystem& mp_sys,
                                  const std::vector<std::vector<QMat>>& f,
                                  const Rational& k, int m, size_t probes, Rng& rng) {
  if (m < 0) throw domain_error("snake check needs m >= 0");
  m_sys.validate();
  mp_sys.validate();
  if (m_sys.levels != mp_sys.levels) throw domain_error("snake systems on different grids");
  size_t degrees = m_sys.complexes[0].spaces.size();
  if (f.size() != m_sys.levels.size()) throw domain_error("one f block per level");

  SnakeOutcome out;
  out.constant = std::max(pow_q(k, 4), Rational(pow_q(k, 3) + k + 1));

  // f is a norm-nonincreasing map of systems
  for (size_t l = 0; l < f.size(); ++l) {
    if (f[l].size() != degrees) throw domain_error("f degree count mismatch");
    const auto& src = m_sys.complexes[l];
    const auto& dst = mp_sys.complexes[l];
    for (size_t i = 0; i < degrees; ++i) {
      if (src.spaces[i].dim == 0) continue;
      if (f[l][i].size() != dst.spaces[i].dim || cols_of(f[l][i]) != src.spaces[i].dim)
        throw domain_error("f shape mismatch");
      if (dst.spaces[i].dim > 0 &&
          op_norm(f[l][i], src.spaces[i].norm, dst.spaces[i].norm) > 1)
        throw hypothesis_failure("f is norm-increasing");
      if (i + 1 < degrees && src.spaces[i + 1].dim > 0 && dst.spaces[i + 1].dim > 0 &&
          !mat_eq(mat_mul(f[l][i + 1], src.d[i]), mat_mul(dst.d[i], f[l][i])))
        throw hypothesis_failure("f does not commute with d");
      if (l + 1 < f.size() && m_sys.complexes[l + 1].spaces[i].dim > 0 &&
          !mat_eq(mat_mul(f[l][i], m_sys.res[l][i]), mat_mul(mp_sys.res[l][i], f[l + 1][i])))
        throw hypothesis_failure("f does not commute with res");
    }
  }

  // the displayed bound ||res_{kc,c}(x)|| <= k ||f_{kc}(x)||, degrees 0..m+1
  bool pair_found = false;
  for (size_t lo = 0; lo < m_sys.levels.size(); ++lo) {
    for (size_t hi = lo; hi < m_sys.levels.size(); ++hi) {
      if (m_sys.levels[hi] != k * m_sys.levels[lo]) continue;
      pair_found = true;
      for (size_t i = 0; i < degrees && i <= size_t(m) + 1; ++i) {
        if (m_sys.complexes[hi].spaces[i].dim == 0) continue;
        auto ratio = sup_ratio(m_sys.res_between(hi, lo, i), f[hi][i],
                               m_sys.complexes[lo].spaces[i].norm,
                               mp_sys.complexes[hi].spaces[i].norm);
        if (!ratio) throw hypothesis_failure("res does not vanish on ker f");
        if (*ratio > k) throw hypothesis_failure("res/f bound exceeds k");
        out.hypothesis_worst_ratio =
            std::max(out.hypothesis_worst_ratio, double(to_ld(*ratio / k)));
      }
    }
  }
  if (!pair_found) throw grid_mismatch("no level pair at ratio k");

  Rng rng_m = rng.substream(11);
  Rng rng_mp = rng.substream(12);
  if (check_k_exact(m_sys, k, m, m_sys.levels[0], probes, rng_m).violation_found)
    throw hypothesis_failure("M is not k-exact on probes");
  if (check_k_exact(mp_sys, k, m, m_sys.levels[0], probes, rng_mp).violation_found)
    throw hypothesis_failure("M' is not k-exact on probes");

  AdmissibleSystem n_sys = quotient_system(mp_sys, f);
  n_sys.validate();

  if (m - 1 < 0) return out;  // conclusion range is empty
  Rng rng_n = rng.substream(13);
  out.conclusion = check_k_exact(n_sys, out.constant, m - 1, m_sys.levels[0], probes, rng_n);
  return out;
}

void DoubleComplexSystem::validate() const {
  if (levels.size() < 3) throw domain_error("need at least three levels");
  if (lv.size() != levels.size()) throw domain_error("level data count mismatch");
  for (size_t l = 0; l + 1 < levels.size(); ++l)
    if (levels[l + 1] != kp * levels[l]) throw domain_error("levels must be geometric in k'");
  if (res.size() + 1 != levels.size()) throw domain_error("one res block per adjacent pair");
  if (h.size() + 1 != levels.size()) throw domain_error("one homotopy per adjacent pair");
  if (delta.size() + 1 != levels.size()) throw domain_error("one delta per adjacent pair");

  size_t P = lv[0].M.size();
  size_t Q = P > 0 ? lv[0].M[0].size() : 0;
  if (P < 2 || Q < 2) throw domain_error("need at least a 2x2 grid");
  for (size_t l = 0; l < lv.size(); ++l) {
    const auto& L = lv[l];
    if (L.M.size() != P) throw domain_error("grid height mismatch");
    for (size_t p = 0; p < P; ++p) {
      if (L.M[p].size() != Q) throw domain_error("grid width mismatch");
      for (size_t q = 0; q < Q; ++q) {
        L.M[p][q].norm.validate();
        if (L.M[p][q].norm.dim() != L.M[p][q].dim) throw domain_error("norm dimension mismatch");
      }
    }
    auto check_map = [&](const QMat& A, const NormedSpace& from, const NormedSpace& to,
                         const char* what) {
      if (from.dim == 0 || to.dim == 0) return;
      if (A.size() != to.dim || cols_of(A) != from.dim) throw domain_error(what);
      if (op_norm(A, from.norm, to.norm) > 1)
        throw domain_error("double complex map must be norm-nonincreasing");
    };
    for (size_t p = 0; p + 1 < P; ++p)
      for (size_t q = 0; q < Q; ++q)
        check_map(L.d[p][q], L.M[p][q], L.M[p + 1][q], "vertical map shape");
    for (size_t p = 0; p < P; ++p)
      for (size_t q = 0; q + 1 < Q; ++q)
        check_map(L.dp[p][q], L.M[p][q], L.M[p][q + 1], "horizontal map shape");
    auto nonzero = [](const QMat& A) {
      for (const auto& r : A)
        for (const auto& e : r)
          if (e != 0) return true;
      return false;
    };
    for (size_t p = 0; p + 2 < P; ++p)
      for (size_t q = 0; q < Q; ++q)
        if (nonzero(mat_mul(L.d[p + 1][q], L.d[p][q]))) throw domain_error("vertical d^2 != 0");
    for (size_t p = 0; p < P; ++p)
      for (size_t q = 0; q + 2 < Q; ++q)
        if (nonzero(mat_mul(L.dp[p][q + 1], L.dp[p][q]))) throw domain_error("horizontal d^2 != 0");
    for (size_t p = 0; p + 1 < P; ++p)
      for (size_t q = 0; q + 1 < Q; ++q)
        if (!mat_eq(mat_mul(L.dp[p + 1][q], L.d[p][q]), mat_mul(L.d[p][q + 1], L.dp[p][q])))
          throw domain_error("squares must commute");
  }
  for (size_t l = 0; l + 1 < levels.size(); ++l) {
    const auto& lo = lv[l];
    const auto& hi = lv[l + 1];
    for (size_t p = 0; p < P; ++p)
      for (size_t q = 0; q < Q; ++q) {
        const QMat& r = res[l][p][q];
        if (lo.M[p][q].dim == 0) continue;
        if (r.size() != lo.M[p][q].dim || cols_of(r) != hi.M[p][q].dim)
          throw domain_error("res shape mismatch");
        if (op_norm(r, hi.M[p][q].norm, lo.M[p][q].norm) > 1)
          throw domain_error("res must be norm-nonincreasing");
        if (p + 1 < P && !mat_eq(mat_mul(res[l][p + 1][q], hi.d[p][q]),
                                 mat_mul(lo.d[p][q], r)))
          throw domain_error("res does not commute with d");
        if (q + 1 < Q && !mat_eq(mat_mul(res[l][p][q + 1], hi.dp[p][q]),
                                 mat_mul(lo.dp[p][q], r)))
          throw domain_error("res does not commute with d'");
      }
    // homotopy typing: h[l] from M^{0,1} at level l+1 to M^{1,0} at level l
    if (h[l].size() != lo.M[1][0].dim || cols_of(h[l]) != hi.M[0][1].dim)
      throw domain_error("homotopy shape mismatch");
    if (delta[l].size() != hi.M[1][0].dim || cols_of(delta[l]) != lo.M[0][0].dim)
      throw domain_error("delta shape mismatch");
  }
  // the homotopic map from level l+2 factors through delta at level l
  for (size_t l = 0; l + 2 < levels.size(); ++l) {
    const auto& top = lv[l + 2];
    QMat phi = mat_mul(res[l + 1][1][0], top.d[0][0]);
    QMat hd = mat_mul(h[l + 1], top.dp[0][0]);
    for (size_t i = 0; i < phi.size(); ++i)
      for (size_t j = 0; j < phi[i].size(); ++j) phi[i][j] += hd[i][j];
    QMat down = mat_mul(res[l][0][0], res[l + 1][0][0]);
    if (!mat_eq(phi, mat_mul(delta[l], down)))
      throw domain_error("homotopic map does not factor through delta");
  }
}

DoubleOutcome double_complex_check(const DoubleComplexSystem& sys, const Rational& k,
                                   int m, size_t probes, Rng& rng) {
  if (m != 0)
    throw domain_error("degrees above 0 need the quotient induction; not supported");
  sys.validate();
  if (sys.kp < k) throw hypothesis_failure("level ratio k' below k");

  DoubleOutcome out;
  out.eps = Rational(1) / (2 * k);

  // column hypothesis in the form the degree-0 chain uses
  for (size_t l = 0; l + 1 < sys.levels.size(); ++l) {
    auto ratio = sup_ratio(sys.res[l][0][0], sys.lv[l + 1].d[0][0],
                           sys.lv[l].M[0][0].norm, sys.lv[l + 1].M[1][0].norm);
    if (!ratio) throw hypothesis_failure("res does not vanish on ker d");
    if (*ratio > k) throw hypothesis_failure("column exactness constant exceeds k");
  }

  out.H = 0;
  for (size_t l = 0; l + 1 < sys.levels.size(); ++l) {
    out.H = std::max(out.H, op_norm(sys.h[l], sys.lv[l + 1].M[0][1].norm,
                                    sys.lv[l].M[1][0].norm));
    Rational dn = op_norm(sys.delta[l], sys.lv[l].M[0][0].norm,
                          sys.lv[l + 1].M[1][0].norm);
    if (dn > out.eps) throw hypothesis_failure("delta norm exceeds 1/(2k)");
  }
  if (out.H == 0) out.H = 1;  // h = 0 instances still need a positive constant
  out.constant = std::max(Rational(sys.kp * sys.kp), Rational(2 * k * out.H));

  KExactReport rep;
  Rational two_k_h = 2 * k * out.H;
  for (size_t lo = 0; lo + 2 < sys.levels.size(); ++lo) {
    size_t hi = lo + 2;
    KExactRow row;
    row.level_hi = hi;
    row.level_lo = lo;
    row.degree = 0;
    row.worst_excess = 0;
    QMat down = mat_mul(sys.res[lo][0][0], sys.res[lo + 1][0][0]);
    const auto& top = sys.lv[hi];
    LevelComplex first_row;
    first_row.spaces = {top.M[0][0], top.M[0][1]};
    first_row.d = {top.dp[0][0]};
    Rng sub = rng.substream(100 + lo);
    for (const auto& x : exactness_probes(first_row, 0, probes, sub)) {
      if (vec_zero(x)) continue;
      Rational lhs = sys.lv[lo].M[0][0].norm.eval(mat_apply(down, x));
      Rational dpn = top.M[0][1].norm.eval(mat_apply(top.dp[0][0], x));
      ++row.probes;
      if (lhs > out.constant * dpn) {
        ++row.violations;
        row.worst_excess = std::max(row.worst_excess, Rational(lhs - out.constant * dpn));
      }
      Rational rhs2 = two_k_h * dpn;
      double ratio = rhs2 > 0 ? double(to_ld(lhs / rhs2)) : (lhs > 0 ? 1e300 : 0.0);
      out.chain_worst = std::max(out.chain_worst, ratio);
      row.worst_ratio = std::max(row.worst_ratio, ratio);
    }
    rep.total_probes += row.probes;
    rep.total_violations += row.violations;
    rep.worst_ratio = std::max(rep.worst_ratio, row.worst_ratio);
    rep.rows.push_back(std::move(row));
  }
  rep.violation_found = rep.total_violations > 0;
  out.conclusion = rep;
  return out;
}

void RNormedModule::validate(Rng& rng) const {
  norm.validate();
  if (norm.quotient_base) throw domain_error("module norm must be weighted");
  size_t n = norm.dim();
  if (T.size() != n || (n > 0 && cols_of(T) != n)) throw domain_error("T shape mismatch");
  if (r <= 0 || r >= 1) throw domain_error("need 0 < r < 1");
  for (size_t j = 0; j < n; ++j) {
    QVec e(n, Rational(0));
    e[j] = 1;
    if (norm.eval(mat_apply(T, e)) != r * norm.eval(e))
      throw domain_error("T does not scale the norm by r on basis vectors");
  }
  Rng local = rng.substream(7);
  for (int t = 0; t < 20; ++t) {
    QVec v(n);
    for (size_t j = 0; j < n; ++j) v[j] = Rational(long(local.range(-9, 9)));
    if (norm.eval(mat_apply(T, v)) != r * norm.eval(v))
      throw domain_error("T does not scale the norm by r");
  }
}

Rational ShiftModel::weight(const ZVec& pt) const {
  Rational out = 0;
  for (size_t i = 0; i < pt.size(); ++i) out += Rational(abs(pt[i])) * pow_q(rp, long(i) + 1);
  return out;
}

ZVec ShiftModel::shift_down(const ZVec& pt) const {
  ZVec out(pt.begin() + 1, pt.end());
  out.push_back(0);
  return out;
}

std::optional<size_t> ShiftModel::outer_index(const ZVec& pt) const {
  // layout: zero tuple at index 0, the rest sorted
  if (outer.empty()) return std::nullopt;
  if (outer[0] == pt) return size_t(0);
  auto it = std::lower_bound(outer.begin() + 1, outer.end(), pt);
  if (it == outer.end() || *it != pt) return std::nullopt;
  return size_t(it - outer.begin());
}

ShiftModel build_shift_model(const Rational& rp, const Rational& c, size_t depth,
                             size_t point_cap) {
  if (rp <= 0 || rp >= 1 || c <= 0 || depth == 0) throw domain_error("bad shift model parameters");
  ShiftModel model;
  model.rp = rp;
  model.c = c;
  model.depth = depth;

  std::vector<ZVec> pts;
  ZVec cur(depth, Integer(0));
  // depth-first over coefficient tuples, pruning on the running weight
  std::function<void(size_t, Rational)> rec = [&](size_t idx, Rational used) {
    if (idx == depth) {
      pts.push_back(cur);
      if (pts.size() > point_cap) throw budget_exceeded("shift model ball too large");
      return;
    }
    Rational unit = pow_q(rp, long(idx) + 1);
    long bound = 0;
    {
      Rational room = (c - used) / unit;
      Integer fl = room.get_num() / room.get_den();
      if (fl > 1000000) throw budget_exceeded("shift model coefficient range too large");
      bound = long(fl.get_si());
    }
    for (long a = -bound; a <= bound; ++a) {
      cur[idx] = a;
      rec(idx + 1, used + Rational(std::abs(a)) * unit);
    }
    cur[idx] = 0;
  };
  rec(0, Rational(0));

  std::sort(pts.begin(), pts.end());
  model.outer = std::move(pts);
  // promised layout: the zero tuple sits at index 0
  ZVec zero(depth, Integer(0));
  auto zit = std::lower_bound(model.outer.begin(), model.outer.end(), zero);
  std::rotate(model.outer.begin(), zit, zit + 1);
  std::sort(model.outer.begin() + 1, model.outer.end());

  for (size_t i = 0; i < model.outer.size(); ++i)
    if (model.weight(model.outer[i]) <= rp * c) {
      model.inner.push_back(model.outer[i]);
      model.inner_to_outer.push_back(i);
    }
  return model;
}

namespace {

size_t outer_at(const ShiftModel& model, const ZVec& pt) {
  auto idx = model.outer_index(pt);
  if (!idx) throw domain_error("point escapes the shift model");
  return *idx;
}

}  // namespace

TinvResult tinv_solve(const ShiftModel& model, const RNormedModule& V,
                      const std::vector<QVec>& f, const Rational& eps,
                      size_t term_budget) {
  if (f.size() != model.inner.size()) throw domain_error("f table size mismatch");
  if (term_budget < model.depth + 1)
    throw budget_exceeded("term budget below the shift orbit length");
  size_t n = V.norm.dim();


  std::map<ZVec, size_t> inner_lookup;
  for (size_t i = 0; i < model.inner.size(); ++i) inner_lookup.emplace(model.inner[i], i);
  auto ftilde = [&](const ZVec& pt) -> QVec {
    auto it = inner_lookup.find(pt);
    if (it == inner_lookup.end()) return QVec(n, Rational(0));
    return f[it->second];
  };

  // powers of T and the closed-form geometric tail T^{depth+1} (I-T)^{-1}
  std::vector<QMat> Tpow(model.depth + 2);
  Tpow[0] = mat_identity(n);
  for (size_t i = 1; i < Tpow.size(); ++i) Tpow[i] = mat_mul(V.T, Tpow[i - 1]);
  QMat ImT = mat_identity(n);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) ImT[i][j] -= V.T[i][j];
  QMat ImT_inv(n);
  for (size_t j = 0; j < n; ++j) {
    QVec e(n, Rational(0));
    e[j] = 1;
    auto sol = solve(ImT, e);
    if (!sol) throw domain_error("I - T is singular");  // impossible for r < 1
    for (size_t i = 0; i < n; ++i) ImT_inv[i].push_back((*sol)[i]);
  }
  QMat tail = mat_mul(Tpow[model.depth + 1], ImT_inv);
  ZVec zero(model.depth, Integer(0));
  QVec f0 = ftilde(zero);

  TinvResult out;
  out.g.assign(model.outer.size(), QVec(n, Rational(0)));
  for (size_t i = 0; i < model.outer.size(); ++i) {
    ZVec pt = model.outer[i];
    QVec acc(n, Rational(0));
    for (size_t step = 0; step < model.depth; ++step) {
      QVec term = mat_apply(Tpow[step + 1], ftilde(pt));
      for (size_t j = 0; j < n; ++j) acc[j] += term[j];
      pt = model.shift_down(pt);
    }
    QVec term = mat_apply(tail, f0);
    for (size_t j = 0; j < n; ++j) acc[j] += term[j];
    out.g[i] = std::move(acc);
  }

  out.f_norm = 0;
  for (const auto& v : f) out.f_norm = std::max(out.f_norm, V.norm.eval(v));
  out.g_norm = 0;
  for (const auto& v : out.g) out.g_norm = std::max(out.g_norm, V.norm.eval(v));

  // T^{-1} g(x) - g(T^{-1} x) should reproduce f exactly
  QMat Tinv(n);
  for (size_t j = 0; j < n; ++j) {
    QVec e(n, Rational(0));
    e[j] = 1;
    auto sol = solve(V.T, e);
    if (!sol) throw domain_error("T is singular");
    for (size_t i = 0; i < n; ++i) Tinv[i].push_back((*sol)[i]);
  }
  out.residual_max = 0;
  for (size_t i = 0; i < model.inner.size(); ++i) {
    const ZVec& x = model.inner[i];
    QVec lhs = mat_apply(Tinv, out.g[outer_at(model, x)]);
    QVec rhs = out.g[outer_at(model, model.shift_down(x))];
    QVec diff(n);
    for (size_t j = 0; j < n; ++j) diff[j] = f[i][j] - (lhs[j] - rhs[j]);
    out.residual_max = std::max(out.residual_max, V.norm.eval(diff));
  }

  Rational cap = V.r / (1 - V.r) * out.f_norm;
  out.bound_ratio = cap > 0 ? double(to_ld(out.g_norm / cap)) : 0.0;
  if (cap > 0 && out.g_norm > cap * (1 + eps))
    throw hypothesis_failure("series bound exceeded");  // cannot happen; defensive
  return out;
}

Rational tinv_forward_ratio(const ShiftModel& model, const RNormedModule& V,
                            const std::vector<QVec>& g) {
  if (g.size() != model.outer.size()) throw domain_error("g table size mismatch");
  size_t n = V.norm.dim();

  QMat Tinv(n);
  for (size_t j = 0; j < n; ++j) {
    QVec e(n, Rational(0));
    e[j] = 1;
    auto sol = solve(V.T, e);
    if (!sol) throw domain_error("T is singular");
    for (size_t i = 0; i < n; ++i) Tinv[i].push_back((*sol)[i]);
  }
  Rational g_norm = 0;
  for (const auto& v : g) g_norm = std::max(g_norm, V.norm.eval(v));
  if (g_norm == 0) return Rational(0);
  Rational out_norm = 0;
  for (const auto& x : model.inner) {
    QVec lhs = mat_apply(Tinv, g[outer_at(model, x)]);
    QVec rhs = g[outer_at(model, model.shift_down(x))];
    QVec diff(n);
    for (size_t j = 0; j < n; ++j) diff[j] = lhs[j] - rhs[j];
    out_norm = std::max(out_norm, V.norm.eval(diff));
  }
  return out_norm / g_norm;
}

CompleteLiftResult complete_exact_lift(const CompleteLiftProblem& pb,
                                       std::vector<double> y_hat, double eps) {
  CompleteLiftResult out;
  out.y_norm = pb.norm1(y_hat);
  if (out.y_norm == 0) {
    out.x_hat.assign(pb.dim0, 0.0);
    out.bound_ok = true;
    return out;
  }

  auto vsub = [](const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> o(a.size());
    for (size_t i = 0; i < a.size(); ++i) o[i] = a[i] - b[i];
    return o;
  };

  double budget = eps * out.y_norm / (2 * pb.C);
  std::vector<double> remaining = y_hat;
  std::vector<double> x_acc;
  double stop = 1e-12 * out.y_norm;
  const double slack = 1 + 1e-9;

  for (size_t it = 0;; ++it) {
    double rem_norm = pb.norm1(remaining);
    if (rem_norm <= stop) break;
    if (it > 200) throw precision_exhausted("completion lift did not converge");

    double eps_next = budget / double(1ull << std::min<size_t>(it + 1, 60));
    double delta = eps_next / (2 * (1 + pb.D * pb.d1_norm));
    std::vector<double> y = pb.approx(remaining, delta);
    if (pb.norm1(vsub(remaining, y)) > delta * slack)
      throw hypothesis_failure("approximation oracle missed its tolerance");

    // push the approximation back into the kernel of d1
    std::vector<double> z = pb.d1(y);
    std::vector<double> yk = y;
    bool any_z = false;
    for (double v : z) any_z = any_z || v != 0;
    if (any_z) {
      std::vector<double> y_corr = pb.solve1(z);
      if (pb.norm2 && pb.norm1(y_corr) > pb.D * pb.norm2(z) * slack)
        throw hypothesis_failure("correction oracle exceeded its constant");
      yk = vsub(y, y_corr);
    }

    std::vector<double> x = pb.solve0(yk);
    ++out.corrections;
    if (pb.norm0(x) > pb.C * pb.norm1(yk) * slack)
      throw hypothesis_failure("kernel lift oracle exceeded its constant");
    std::vector<double> dx = pb.d0(x);
    if (pb.norm1(vsub(dx, yk)) > 1e-9 * (pb.norm1(yk) + 1))
      throw hypothesis_failure("kernel lift oracle is not a section");

    if (x_acc.empty()) x_acc.assign(x.size(), 0.0);
    for (size_t i = 0; i < x.size(); ++i) x_acc[i] += x[i];
    remaining = vsub(remaining, yk);
  }

  if (x_acc.empty()) x_acc.assign(pb.dim0, 0.0);
  out.x_hat = x_acc;
  out.x_norm = pb.norm0(out.x_hat);
  out.residual = pb.norm1(vsub(y_hat, pb.d0(out.x_hat)));
  out.bound_ok = out.x_norm <= (pb.C + eps) * out.y_norm * slack;
  return out;
}

}  // namespace ztr
