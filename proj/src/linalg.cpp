#include "ztr/linalg.hpp"

#include <algorithm>
#include <cstdlib>

namespace ztr {

QVec mat_apply(const QMat& A, const QVec& x) {
  QVec out(A.size(), Rational(0));
  for (size_t i = 0; i < A.size(); ++i) {
    if (A[i].size() != x.size()) throw domain_error("mat_apply: shape mismatch");
    for (size_t j = 0; j < x.size(); ++j)
      if (A[i][j] != 0 && x[j] != 0) out[i] += A[i][j] * x[j];
  }
  return out;
}

QMat mat_mul(const QMat& A, const QMat& B) {
  if (A.empty() || B.empty()) return {};
  size_t n = A.size(), k = B.size(), m = B[0].size();
  QMat out(n, QVec(m, Rational(0)));
  for (size_t i = 0; i < n; ++i) {
    if (A[i].size() != k) throw domain_error("mat_mul: shape mismatch");
    for (size_t t = 0; t < k; ++t) {
      if (A[i][t] == 0) continue;
      for (size_t j = 0; j < m; ++j)
        if (B[t][j] != 0) out[i][j] += A[i][t] * B[t][j];
    }
  }
  return out;
}

QMat mat_identity(size_t n) {
  QMat out(n, QVec(n, Rational(0)));
  for (size_t i = 0; i < n; ++i) out[i][i] = 1;
  return out;
}

namespace {
// Row echelon in place; returns pivot columns.
std::vector<size_t> echelon(QMat& A) {
  std::vector<size_t> pivots;
  size_t rows = A.size();
  if (rows == 0) return pivots;
  size_t cols = A[0].size();
  size_t r = 0;
  for (size_t c = 0; c < cols && r < rows; ++c) {
    size_t sel = r;
    while (sel < rows && A[sel][c] == 0) ++sel;
    if (sel == rows) continue;
    std::swap(A[sel], A[r]);
    Rational inv = 1 / A[r][c];
    for (size_t j = c; j < cols; ++j) A[r][j] *= inv;
    for (size_t i = 0; i < rows; ++i) {
      if (i == r || A[i][c] == 0) continue;
      Rational f = A[i][c];
      for (size_t j = c; j < cols; ++j) A[i][j] -= f * A[r][j];
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}
}  // namespace

size_t rank(QMat A) { return echelon(A).size(); }

std::optional<QVec> solve(QMat A, QVec b) {
  size_t rows = A.size();
  size_t cols = rows == 0 ? 0 : A[0].size();
  for (size_t i = 0; i < rows; ++i) A[i].push_back(b[i]);
  QMat& aug = A;
  std::vector<size_t> pivots;
  {
    // echelon over the first `cols` columns only
    size_t r = 0;
    for (size_t c = 0; c < cols && r < rows; ++c) {
      size_t sel = r;
      while (sel < rows && aug[sel][c] == 0) ++sel;
      if (sel == rows) continue;
      std::swap(aug[sel], aug[r]);
      Rational inv = 1 / aug[r][c];
      for (size_t j = c; j <= cols; ++j) aug[r][j] *= inv;
      for (size_t i = 0; i < rows; ++i) {
        if (i == r || aug[i][c] == 0) continue;
        Rational f = aug[i][c];
        for (size_t j = c; j <= cols; ++j) aug[i][j] -= f * aug[r][j];
      }
      pivots.push_back(c);
      ++r;
    }
    for (size_t i = r; i < rows; ++i)
      if (aug[i][cols] != 0) return std::nullopt;
  }
  QVec x(cols, Rational(0));
  for (size_t k = 0; k < pivots.size(); ++k) x[pivots[k]] = aug[k][cols];
  return x;
}

std::vector<QVec> kernel_basis(const QMat& A) {
  QMat E = A;
  auto pivots = echelon(E);
  size_t cols = A.empty() ? 0 : A[0].size();
  std::vector<bool> is_pivot(cols, false);
  for (size_t c : pivots) is_pivot[c] = true;
  std::vector<QVec> basis;
  for (size_t free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    QVec v(cols, Rational(0));
    v[free] = 1;
    for (size_t k = 0; k < pivots.size(); ++k) v[pivots[k]] = -E[k][free];
    basis.push_back(v);
  }
  return basis;
}

QVec least_squares(const QMat& A, const QVec& b) {
  size_t rows = A.size();
  size_t cols = rows == 0 ? 0 : A[0].size();
  QMat ata(cols, QVec(cols, Rational(0)));
  QVec atb(cols, Rational(0));
  for (size_t i = 0; i < rows; ++i) {
    for (size_t j = 0; j < cols; ++j) {
      if (A[i][j] == 0) continue;
      atb[j] += A[i][j] * b[i];
      for (size_t k = j; k < cols; ++k) ata[j][k] += A[i][j] * A[i][k];
    }
  }
  for (size_t j = 0; j < cols; ++j)
    for (size_t k = 0; k < j; ++k) ata[j][k] = ata[k][j];
  auto sol = solve(ata, atb);  // normal equations are always consistent
  if (!sol) throw domain_error("least_squares: normal equations inconsistent");
  return *sol;
}

std::vector<Integer> smith_divisors(ZMat A) {
  size_t rows = A.size();
  size_t cols = rows == 0 ? 0 : A[0].size();
  size_t t = 0;
  std::vector<Integer> diag;
  while (t < rows && t < cols) {
    // find the smallest nonzero entry in the remaining block
    size_t pi = t, pj = t;
    bool found = false;
    Integer best;
    for (size_t i = t; i < rows; ++i)
      for (size_t j = t; j < cols; ++j) {
        if (A[i][j] == 0) continue;
        Integer a = abs(A[i][j]);
        if (!found || a < best) {
          best = a;
          pi = i;
          pj = j;
          found = true;
        }
      }
    if (!found) break;
    std::swap(A[t], A[pi]);
    for (size_t i = 0; i < rows; ++i) std::swap(A[i][t], A[i][pj]);
    // clear row and column t by division steps; restart if a remainder
    // becomes the new smaller pivot
    bool clean = true;
    for (size_t i = t + 1; i < rows; ++i) {
      if (A[i][t] == 0) continue;
      Integer q = A[i][t] / A[t][t];  // truncated is fine, loop re-checks
      for (size_t j = t; j < cols; ++j) A[i][j] -= q * A[t][j];
      if (A[i][t] != 0) clean = false;
    }
    for (size_t j = t + 1; j < cols; ++j) {
      if (A[t][j] == 0) continue;
      Integer q = A[t][j] / A[t][t];
      for (size_t i = t; i < rows; ++i) A[i][j] -= q * A[i][t];
      if (A[t][j] != 0) clean = false;
    }
    if (!clean) continue;  // smaller remainders exist, pick a new pivot
    diag.push_back(abs(A[t][t]));
    ++t;
  }
  // enforce the divisor chain d1 | d2 | ...
  for (size_t i = 0; i + 1 < diag.size(); ++i) {
    for (size_t j = i + 1; j < diag.size(); ++j) {
      if (diag[j] % diag[i] == 0) continue;
      Integer g, l;
      mpz_gcd(g.get_mpz_t(), diag[i].get_mpz_t(), diag[j].get_mpz_t());
      l = diag[i] / g * diag[j];
      diag[i] = g;
      diag[j] = l;
    }
  }
  return diag;
}

ZMat integer_kernel(const ZMat& A) {
  size_t rows = A.size();
  size_t cols = rows == 0 ? 0 : A[0].size();
  ZMat W = A;
  // V tracks column operations; kernel columns come out of V.
  ZMat V(cols, ZVec(cols, Integer(0)));
  for (size_t i = 0; i < cols; ++i) V[i][i] = 1;

  auto col_sub = [&](size_t dst, size_t src, const Integer& q) {
    for (size_t i = 0; i < rows; ++i) W[i][dst] -= q * W[i][src];
    for (size_t i = 0; i < cols; ++i) V[i][dst] -= q * V[i][src];
  };
  auto col_swap = [&](size_t a, size_t b) {
    for (size_t i = 0; i < rows; ++i) std::swap(W[i][a], W[i][b]);
    for (size_t i = 0; i < cols; ++i) std::swap(V[i][a], V[i][b]);
  };

  size_t t = 0;
  for (size_t r = 0; r < rows && t < cols; ++r) {
    while (true) {
      size_t nonzero = cols;
      size_t count = 0;
      Integer best;
      size_t bestc = cols;
      for (size_t c = t; c < cols; ++c) {
        if (W[r][c] == 0) continue;
        ++count;
        nonzero = c;
        Integer a = abs(W[r][c]);
        if (bestc == cols || a < best) {
          best = a;
          bestc = c;
        }
      }
      if (count == 0) break;
      if (count == 1) {
        col_swap(t, nonzero);
        ++t;
        break;
      }
      // reduce every other column by the smallest entry
      for (size_t c = t; c < cols; ++c) {
        if (c == bestc || W[r][c] == 0) continue;
        Integer q;
        mpz_fdiv_q(q.get_mpz_t(), W[r][c].get_mpz_t(), W[r][bestc].get_mpz_t());
        if (q != 0) col_sub(c, bestc, q);
      }
    }
  }
  ZMat out;
  for (size_t c = t; c < cols; ++c) {
    bool zero = true;
    for (size_t i = 0; i < rows; ++i)
      if (W[i][c] != 0) zero = false;
    if (!zero) throw domain_error("integer_kernel: internal, column not cleared");
    ZVec v(cols);
    for (size_t i = 0; i < cols; ++i) v[i] = V[i][c];
    out.push_back(v);
  }
  return out;
}

namespace {
// Dense tableau simplex, Bland's rule throughout.
struct Tableau {
  QMat T;                  // m rows of [coeffs | rhs]
  QVec cost;               // n reduced costs
  Rational obj = Rational(0);
  std::vector<size_t> basis;  // basis[i] = column basic in row i
  size_t n = 0;

  // returns false when unbounded
  bool run() {
    while (true) {
      size_t enter = n;
      for (size_t j = 0; j < n; ++j)
        if (cost[j] < 0) {
          enter = j;
          break;
        }
      if (enter == n) return true;
      size_t leave = T.size();
      for (size_t i = 0; i < T.size(); ++i) {
        if (T[i][enter] <= 0) continue;
        if (leave == T.size()) {
          leave = i;
          continue;
        }
        Rational cur = T[i].back() / T[i][enter];
        Rational old = T[leave].back() / T[leave][enter];
        if (cur < old || (cur == old && basis[i] < basis[leave])) leave = i;
      }
      if (leave == T.size()) return false;
      pivot(leave, enter);
    }
  }

  void pivot(size_t row, size_t col) {
    Rational inv = 1 / T[row][col];
    for (auto& v : T[row]) v *= inv;
    for (size_t i = 0; i < T.size(); ++i) {
      if (i == row || T[i][col] == 0) continue;
      Rational f = T[i][col];
      for (size_t j = 0; j <= n; ++j) T[i][j] -= f * T[row][j];
    }
    Rational f = cost[col];
    if (f != 0) {
      for (size_t j = 0; j < n; ++j) cost[j] -= f * T[row][j];
      obj -= f * T[row].back();
    }
    basis[row] = col;
  }
};
}  // namespace

std::optional<LpResult> lp_minimize(const QMat& A, const QVec& b, const QVec& c) {
  size_t m = A.size();
  size_t nx = c.size();
  // x = u - v with u, v >= 0, slack s >= 0, artificials a >= 0.
  size_t n = 2 * nx + m;  // before artificials
  Tableau tb;
  tb.n = n + m;
  tb.T.assign(m, QVec(tb.n + 1, Rational(0)));
  tb.basis.resize(m);
  for (size_t i = 0; i < m; ++i) {
    int sign = b[i] < 0 ? -1 : 1;
    for (size_t j = 0; j < nx; ++j) {
      tb.T[i][j] = sign * A[i][j];
      tb.T[i][nx + j] = -sign * A[i][j];
    }
    tb.T[i][2 * nx + i] = sign;        // slack
    tb.T[i][n + i] = 1;                // artificial
    tb.T[i][tb.n] = sign * b[i];
    tb.basis[i] = n + i;
  }
  // Phase 1: minimize the sum of artificials.
  tb.cost.assign(tb.n, Rational(0));
  for (size_t i = 0; i < m; ++i) tb.cost[n + i] = 1;
  // reduce costs against the starting basis
  for (size_t i = 0; i < m; ++i) {
    for (size_t j = 0; j < tb.n; ++j) tb.cost[j] -= tb.T[i][j];
    tb.obj -= tb.T[i].back();
  }
  if (!tb.run()) throw domain_error("lp_minimize: phase 1 unbounded");
  if (tb.obj != 0) throw domain_error("lp_minimize: infeasible");
  // Drive artificials out of the basis; a row that cannot be pivoted is
  // redundant (all real coefficients zero) and gets dropped.
  for (size_t i = 0; i < tb.T.size(); ++i) {
    if (tb.basis[i] < n) continue;
    size_t col = n;
    for (size_t j = 0; j < n; ++j)
      if (tb.T[i][j] != 0) {
        col = j;
        break;
      }
    if (col < n) tb.pivot(i, col);
  }
  {
    QMat kept;
    std::vector<size_t> kept_basis;
    for (size_t i = 0; i < tb.T.size(); ++i) {
      if (tb.basis[i] >= n) continue;
      QVec row(tb.T[i].begin(), tb.T[i].begin() + n);
      row.push_back(tb.T[i].back());
      kept.push_back(std::move(row));
      kept_basis.push_back(tb.basis[i]);
    }
    tb.T = std::move(kept);
    tb.basis = std::move(kept_basis);
    tb.n = n;
  }
  // Phase 2: the real objective, priced against the current basis.
  tb.cost.assign(tb.n, Rational(0));
  tb.obj = 0;
  for (size_t j = 0; j < nx; ++j) {
    tb.cost[j] = c[j];
    tb.cost[nx + j] = -c[j];
  }
  for (size_t i = 0; i < tb.T.size(); ++i) {
    Rational f = tb.cost[tb.basis[i]];
    if (f == 0) continue;
    for (size_t j = 0; j < tb.n; ++j) tb.cost[j] -= f * tb.T[i][j];
    tb.obj -= f * tb.T[i].back();
  }
  if (!tb.run()) return std::nullopt;
  QVec x(nx, Rational(0));
  for (size_t i = 0; i < tb.T.size(); ++i) {
    if (tb.basis[i] < nx)
      x[tb.basis[i]] += tb.T[i].back();
    else if (tb.basis[i] < 2 * nx)
      x[tb.basis[i] - nx] -= tb.T[i].back();
  }
  LpResult res;
  res.x = x;
  res.value = -tb.obj;
  return res;
}

}  // namespace ztr
