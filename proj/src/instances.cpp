#include "ztr/instances.hpp"

#include <algorithm>

#include "ztr/vendor_json.hpp"

namespace ztr {

namespace {

using json = nlohmann::ordered_json;

Rational pick(Rng& rng, std::initializer_list<Rational> menu) {
  std::vector<Rational> v(menu);
  return v[rng.below(v.size())];
}

// One strand of coordinates running through the split complexes: the same
// coordinate appears as the v block of one degree and the u block of the
// next, with u weight = V/phi. Keeping phi in [1,k] bounds the contraction
// (u,v) <- (0,u) by k at every level, which is the whole exactness argument.
struct CoreData {
  std::vector<Rational> phi;               // per coordinate, in [1, k]
  std::vector<std::vector<Rational>> V;    // [coord][level]
  std::vector<std::vector<Rational>> rho;  // [coord][pair], res scaling
};

CoreData sample_core(Rng& rng, const Rational& k, size_t coords, size_t nlevels) {
  CoreData core;
  for (size_t j = 0; j < coords; ++j) {
    core.phi.push_back(pick(rng, {Rational(1), (1 + k) / 2, k}));
    std::vector<Rational> v(nlevels);
    v[nlevels - 1] = pick(rng, {Rational(1), Rational(2), Rational(3), Rational(3) / 2});
    std::vector<Rational> rho(nlevels - 1);
    for (size_t p = nlevels - 1; p-- > 0;) {
      Rational sigma = pick(rng, {Rational(1), Rational(1) / 2, Rational(1) / 3});
      rho[p] = pick(rng, {Rational(1), Rational(1) / 2, Rational(1) / 4});
      v[p] = v[p + 1] * sigma / rho[p];
    }
    core.V.push_back(std::move(v));
    core.rho.push_back(std::move(rho));
  }
  return core;
}

AdmissibleSystem build_split(const std::vector<Rational>& levels,
                             const std::vector<CoreData>& cores) {
  size_t T = cores.size();
  size_t L = levels.size();
  auto core_dim = [&](size_t t) { return t >= 1 && t <= T ? cores[t - 1].phi.size() : 0; };

  AdmissibleSystem sys;
  sys.levels = levels;
  for (size_t l = 0; l < L; ++l) {
    LevelComplex cx;
    for (size_t i = 0; i <= T; ++i) {
      size_t du = core_dim(i), dv = core_dim(i + 1);
      std::vector<Rational> w;
      for (size_t j = 0; j < du; ++j) w.push_back(cores[i - 1].V[j][l] / cores[i - 1].phi[j]);
      for (size_t j = 0; j < dv; ++j) w.push_back(cores[i].V[j][l]);
      NormedSpace sp;
      sp.dim = du + dv;
      sp.norm = Norm::l1(std::move(w));
      cx.spaces.push_back(std::move(sp));
    }
    for (size_t i = 0; i < T; ++i) {
      size_t du = core_dim(i), dv = core_dim(i + 1);
      QMat d(core_dim(i + 1) + core_dim(i + 2), QVec(du + dv, Rational(0)));
      for (size_t j = 0; j < dv; ++j) d[j][du + j] = 1;  // (u,v) -> (v,0)
      cx.d.push_back(std::move(d));
    }
    sys.complexes.push_back(std::move(cx));
  }
  for (size_t p = 0; p + 1 < L; ++p) {
    std::vector<QMat> blocks;
    for (size_t i = 0; i <= T; ++i) {
      size_t du = core_dim(i), dv = core_dim(i + 1);
      QMat r(du + dv, QVec(du + dv, Rational(0)));
      for (size_t j = 0; j < du; ++j) r[j][j] = cores[i - 1].rho[j][p];
      for (size_t j = 0; j < dv; ++j) r[du + j][du + j] = cores[i].rho[j][p];
      blocks.push_back(std::move(r));
    }
    sys.res.push_back(std::move(blocks));
  }
  return sys;
}

struct Unimodular {
  QMat U, Uinv;
};

Unimodular random_unimodular(Rng& rng, size_t n) {
  QMat U = mat_identity(n), W = mat_identity(n);
  for (size_t t = 0; t < 2 * n; ++t) {
    size_t a = rng.below(n), b = rng.below(n);
    long c = rng.range(-2, 2);
    if (a == b || c == 0) continue;
    // U <- E U with E: row b += c * row a; track W = U^{-1} by W <- W E^{-1}
    for (size_t j = 0; j < n; ++j) U[b][j] += Rational(c) * U[a][j];
    for (size_t i = 0; i < n; ++i) W[i][a] -= Rational(c) * W[i][b];
  }
  for (size_t i = 0; i < n; ++i)
    if (rng.below(2)) {
      for (size_t j = 0; j < n; ++j) U[i][j] = -U[i][j];
      for (size_t j = 0; j < n; ++j) W[j][i] = -W[j][i];
    }
  return {std::move(U), std::move(W)};
}

using TransportGrid = std::vector<std::vector<Unimodular>>;  // [level][degree]

TransportGrid make_transports(Rng& rng, const AdmissibleSystem& sys) {
  TransportGrid out(sys.levels.size());
  for (size_t l = 0; l < sys.levels.size(); ++l)
    for (const auto& sp : sys.complexes[l].spaces)
      out[l].push_back(random_unimodular(rng, sp.dim));
  return out;
}

// change of basis y = U x on every space; norms follow through the inverse so
// the instance stays isometric to the split model
void apply_transport(AdmissibleSystem& sys, const TransportGrid& T) {
  for (size_t l = 0; l < sys.levels.size(); ++l) {
    auto& cx = sys.complexes[l];
    for (size_t i = 0; i < cx.spaces.size(); ++i)
      if (cx.spaces[i].dim > 0)
        cx.spaces[i].norm = cx.spaces[i].norm.with_pullback(T[l][i].Uinv);
    for (size_t i = 0; i + 1 < cx.spaces.size(); ++i)
      if (cx.spaces[i].dim > 0 && cx.spaces[i + 1].dim > 0)
        cx.d[i] = mat_mul(T[l][i + 1].U, mat_mul(cx.d[i], T[l][i].Uinv));
  }
  for (size_t p = 0; p + 1 < sys.levels.size(); ++p)
    for (size_t i = 0; i < sys.complexes[p].spaces.size(); ++i)
      if (sys.complexes[p].spaces[i].dim > 0)
        sys.res[p][i] = mat_mul(T[p][i].U, mat_mul(sys.res[p][i], T[p + 1][i].Uinv));
}

std::vector<size_t> core_sizes(Rng& rng, size_t count) {
  std::vector<size_t> out;
  for (size_t t = 0; t < count; ++t) out.push_back(1 + (rng.below(3) == 0 ? 1 : 0));
  return out;
}

}  // namespace

SnakeInstance make_snake_instance(Rng& rng) {
  SnakeInstance inst;
  inst.k = pick(rng, {Rational(2), Rational(3)});
  inst.m = 1 + int(rng.below(2));
  const Rational K = std::max(pow_q(inst.k, 4), Rational(pow_q(inst.k, 3) + inst.k + 1));
  std::vector<Rational> levels = {Rational(1), inst.k, K};

  size_t T = size_t(inst.m) + 1;  // cores; degrees run 0..T
  std::vector<size_t> msize = core_sizes(rng, T);
  std::vector<CoreData> m_cores, mp_cores;
  std::vector<size_t> extras;
  for (size_t t = 0; t < T; ++t) {
    CoreData mc = sample_core(rng, inst.k, msize[t], levels.size());
    // shared coordinates: same contraction and res scalings, weights divided
    // by psi <= k so that f is nonincreasing while res/f stays within k
    CoreData pc = mc;
    for (size_t j = 0; j < msize[t]; ++j) {
      Rational psi = pick(rng, {Rational(1), Rational(3) / 2, Rational(2)});
      for (auto& v : pc.V[j]) v /= psi;
    }
    size_t extra = rng.below(2);
    extras.push_back(extra);
    if (extra) {
      CoreData fresh = sample_core(rng, inst.k, extra, levels.size());
      for (size_t j = 0; j < extra; ++j) {
        pc.phi.push_back(fresh.phi[j]);
        pc.V.push_back(fresh.V[j]);
        pc.rho.push_back(fresh.rho[j]);
      }
    }
    m_cores.push_back(std::move(mc));
    mp_cores.push_back(std::move(pc));
  }

  inst.m_sys = build_split(levels, m_cores);
  inst.mp_sys = build_split(levels, mp_cores);

  auto cdim = [](const std::vector<CoreData>& cs, size_t t) {
    return t >= 1 && t <= cs.size() ? cs[t - 1].phi.size() : size_t(0);
  };
  std::vector<QMat> f_degree;
  for (size_t i = 0; i <= T; ++i) {
    size_t du = cdim(m_cores, i), dv = cdim(m_cores, i + 1);
    size_t du2 = cdim(mp_cores, i), dv2 = cdim(mp_cores, i + 1);
    QMat f(du2 + dv2, QVec(du + dv, Rational(0)));
    for (size_t j = 0; j < du; ++j) f[j][j] = 1;
    for (size_t j = 0; j < dv; ++j) f[du2 + j][du + j] = 1;
    f_degree.push_back(std::move(f));
  }
  inst.f.assign(levels.size(), f_degree);

  TransportGrid tm = make_transports(rng, inst.m_sys);
  TransportGrid tp = make_transports(rng, inst.mp_sys);
  apply_transport(inst.m_sys, tm);
  apply_transport(inst.mp_sys, tp);
  for (size_t l = 0; l < levels.size(); ++l)
    for (size_t i = 0; i <= T; ++i)
      inst.f[l][i] = mat_mul(tp[l][i].U, mat_mul(inst.f[l][i], tm[l][i].Uinv));
  return inst;
}

SnakeInstance make_snake_zero_m(Rng& rng) {
  SnakeInstance inst = make_snake_instance(rng);
  for (size_t l = 0; l < inst.m_sys.levels.size(); ++l) {
    auto& cx = inst.m_sys.complexes[l];
    for (auto& sp : cx.spaces) {
      sp.dim = 0;
      sp.norm = Norm::l1({});
    }
    for (auto& d : cx.d) d.clear();
    for (size_t i = 0; i < inst.f[l].size(); ++i) {
      size_t rows = inst.mp_sys.complexes[l].spaces[i].dim;
      inst.f[l][i].assign(rows, QVec{});
    }
  }
  for (auto& block : inst.m_sys.res)
    for (auto& r : block) r.clear();
  return inst;
}

SnakeInstance make_snake_identity(Rng& rng) {
  SnakeInstance inst;
  inst.k = pick(rng, {Rational(2), Rational(3)});
  inst.m = 1 + int(rng.below(2));
  const Rational K = std::max(pow_q(inst.k, 4), Rational(pow_q(inst.k, 3) + inst.k + 1));
  std::vector<Rational> levels = {Rational(1), inst.k, K};
  size_t T = size_t(inst.m) + 1;
  std::vector<size_t> sizes = core_sizes(rng, T);
  std::vector<CoreData> cores;
  for (size_t t = 0; t < T; ++t) cores.push_back(sample_core(rng, inst.k, sizes[t], levels.size()));
  inst.m_sys = build_split(levels, cores);
  inst.mp_sys = inst.m_sys;
  std::vector<QMat> f_degree;
  for (const auto& sp : inst.m_sys.complexes[0].spaces) f_degree.push_back(mat_identity(sp.dim));
  inst.f.assign(levels.size(), f_degree);
  TransportGrid t = make_transports(rng, inst.m_sys);
  apply_transport(inst.m_sys, t);
  apply_transport(inst.mp_sys, t);  // same transport keeps f = identity
  return inst;
}

AdmissibleSystem make_k_exact_violation(const Rational& k, const Rational& blowup) {
  if (blowup * k < 1) throw domain_error("violation factor too small for a nonincreasing d");
  AdmissibleSystem sys;
  sys.levels = {Rational(1), k};
  Rational eps = 1 / (k * blowup);
  for (int l = 0; l < 2; ++l) {
    LevelComplex cx;
    for (int i = 0; i < 2; ++i) {
      NormedSpace sp;
      sp.dim = 1;
      sp.norm = Norm::l1({Rational(1)});
      cx.spaces.push_back(sp);
    }
    cx.d.push_back(QMat{{eps}});
    sys.complexes.push_back(std::move(cx));
  }
  sys.res.push_back({mat_identity(1), mat_identity(1)});
  return sys;
}

DoubleInstance make_double_instance(Rng& rng) {
  DoubleInstance inst;
  inst.k = pick(rng, {Rational(2), Rational(3)});
  const Rational k = inst.k;
  const Rational eps = Rational(1) / (2 * k);
  size_t kappa = 1 + rng.below(2);
  Rational u = pick(rng, {Rational(1) / 2, Rational(1) / 3, Rational(1) / 4});
  Rational gamma = pick(rng, {Rational(1), Rational(1) / 2});  // in [1/k, 1]

  DoubleComplexSystem sys;
  sys.kp = k;
  sys.levels = {Rational(1), k, k * k};
  size_t L = 3;

  // weight strands: core alpha runs through q=0 and the first block of q=1,
  // core beta through the K block of q=1 and q=2
  Rational a_top = pick(rng, {Rational(1), Rational(2), Rational(3)});
  Rational tau0 = pick(rng, {Rational(1), Rational(1) / 2, Rational(1) / 3});
  std::vector<Rational> bk_top(kappa), tau2(kappa);
  for (size_t j = 0; j < kappa; ++j) {
    bk_top[j] = pick(rng, {Rational(1), Rational(2), Rational(3) / 2});
    tau2[j] = pick(rng, {Rational(1), Rational(1) / 2});
  }
  std::vector<Rational> rho_a(L - 1), sig_a(L - 1), rho_b(L - 1), sig_b(L - 1);
  for (size_t p = 0; p < L - 1; ++p) {
    rho_a[p] = pick(rng, {Rational(1), Rational(1) / 2, Rational(1) / 4});
    sig_a[p] = pick(rng, {Rational(1), Rational(1) / 2, Rational(1) / 3});
    rho_b[p] = pick(rng, {Rational(1), Rational(1) / 2, Rational(1) / 4});
    sig_b[p] = pick(rng, {Rational(1), Rational(1) / 2});
  }
  // per-level core scales, top level = 1
  std::vector<Rational> scale_a(L, Rational(1)), scale_b(L, Rational(1));
  for (size_t l = L - 1; l-- > 0;) {
    scale_a[l] = scale_a[l + 1] * sig_a[l] / rho_a[l];
    scale_b[l] = scale_b[l + 1] * sig_b[l] / rho_b[l];
  }

  auto weights_at = [&](size_t l, size_t p, size_t q) {
    Rational row = p == 0 ? Rational(1) : gamma / u;
    std::vector<Rational> w;
    if (q == 0) {
      w.push_back(a_top * scale_a[l] * row);
    } else if (q == 1) {
      w.push_back(a_top * tau0 * scale_a[l] * row);
      for (size_t j = 0; j < kappa; ++j) w.push_back(bk_top[j] * scale_b[l] * row);
    } else {
      for (size_t j = 0; j < kappa; ++j) w.push_back(bk_top[j] * tau2[j] * scale_b[l] * row);
    }
    return w;
  };
  size_t dims[3] = {1, 1 + kappa, kappa};

  QMat A(1 + kappa, QVec(1, Rational(0)));
  A[0][0] = 1;
  QMat B(kappa, QVec(1 + kappa, Rational(0)));
  for (size_t j = 0; j < kappa; ++j) B[j][1 + j] = 1;

  for (size_t l = 0; l < L; ++l) {
    DoubleLevel lev;
    lev.M.assign(3, std::vector<NormedSpace>(3));
    lev.d.assign(2, std::vector<QMat>(3));
    lev.dp.assign(3, std::vector<QMat>(2));
    for (size_t p = 0; p < 3; ++p)
      for (size_t q = 0; q < 3; ++q) {
        lev.M[p][q].dim = dims[q];
        lev.M[p][q].norm = Norm::l1(weights_at(l, p, q));
      }
    for (size_t q = 0; q < 3; ++q) {
      QMat uid = mat_identity(dims[q]);
      for (auto& row : uid)
        for (auto& e : row) e *= u;
      lev.d[0][q] = std::move(uid);
      lev.d[1][q] = QMat(dims[q], QVec(dims[q], Rational(0)));
    }
    for (size_t p = 0; p < 3; ++p) {
      lev.dp[p][0] = A;
      lev.dp[p][1] = B;
    }
    sys.lv.push_back(std::move(lev));
  }

  sys.res.resize(L - 1);
  for (size_t p = 0; p < L - 1; ++p) {
    sys.res[p].assign(3, std::vector<QMat>(3));
    for (size_t row = 0; row < 3; ++row) {
      sys.res[p][row][0] = QMat{{rho_a[p]}};
      QMat r1(1 + kappa, QVec(1 + kappa, Rational(0)));
      r1[0][0] = rho_a[p];
      for (size_t j = 0; j < kappa; ++j) r1[1 + j][1 + j] = rho_b[p];
      sys.res[p][row][1] = std::move(r1);
      QMat r2(kappa, QVec(kappa, Rational(0)));
      for (size_t j = 0; j < kappa; ++j) r2[j][j] = rho_b[p];
      sys.res[p][row][2] = std::move(r2);
    }
  }

  // delta[0] carries the leftover of the homotopy identity; its size is set
  // directly from the eps bound, then eta is solved back out of it
  Rational w_from = weights_at(0, 0, 0)[0];
  Rational w_to = weights_at(1, 1, 0)[0];
  Rational dval = eps / 2 * w_from / w_to;
  if (rng.below(2)) dval = -dval;
  std::vector<QVec> eta(L - 1, QVec(1 + kappa, Rational(0)));
  eta[1][0] = dval * rho_a[0] * rho_a[1];
  for (size_t j = 0; j < kappa; ++j) {
    eta[1][1 + j] = Rational(long(rng.range(-2, 2))) / 8;
    eta[0][1 + j] = Rational(long(rng.range(-2, 2))) / 8;
  }
  eta[0][0] = Rational(long(rng.range(-2, 2))) / 8;

  sys.h.resize(L - 1);
  for (size_t l = 0; l < L - 1; ++l) {
    QMat h(1, QVec(1 + kappa, Rational(0)));
    h[0][0] = -u * rho_a[l] + eta[l][0];
    for (size_t j = 0; j < kappa; ++j) h[0][1 + j] = eta[l][1 + j];
    sys.h[l] = std::move(h);
  }
  sys.delta.resize(L - 1);
  sys.delta[0] = QMat{{dval}};
  sys.delta[1] = QMat{{Rational(0)}};

  // conjugate everything by unimodular changes of basis per (level, p, q)
  std::vector<std::vector<std::vector<Unimodular>>> T(L);
  for (size_t l = 0; l < L; ++l) {
    T[l].assign(3, {});
    for (size_t p = 0; p < 3; ++p)
      for (size_t q = 0; q < 3; ++q) T[l][p].push_back(random_unimodular(rng, dims[q]));
  }
  for (size_t l = 0; l < L; ++l)
    for (size_t p = 0; p < 3; ++p)
      for (size_t q = 0; q < 3; ++q) {
        sys.lv[l].M[p][q].norm = sys.lv[l].M[p][q].norm.with_pullback(T[l][p][q].Uinv);
        if (p < 2)
          sys.lv[l].d[p][q] =
              mat_mul(T[l][p + 1][q].U, mat_mul(sys.lv[l].d[p][q], T[l][p][q].Uinv));
        if (q < 2)
          sys.lv[l].dp[p][q] =
              mat_mul(T[l][p][q + 1].U, mat_mul(sys.lv[l].dp[p][q], T[l][p][q].Uinv));
      }
  for (size_t p = 0; p < L - 1; ++p)
    for (size_t row = 0; row < 3; ++row)
      for (size_t q = 0; q < 3; ++q)
        sys.res[p][row][q] =
            mat_mul(T[p][row][q].U, mat_mul(sys.res[p][row][q], T[p + 1][row][q].Uinv));
  for (size_t l = 0; l < L - 1; ++l) {
    sys.h[l] = mat_mul(T[l][1][0].U, mat_mul(sys.h[l], T[l + 1][0][1].Uinv));
    sys.delta[l] = mat_mul(T[l + 1][1][0].U, mat_mul(sys.delta[l], T[l][0][0].Uinv));
  }

  inst.sys = std::move(sys);
  return inst;
}

RNormedModule make_shift_module(Rng& rng, size_t n, const Rational& r) {
  RNormedModule mod;
  mod.r = r;
  mod.norm = Norm::l1(std::vector<Rational>(n, Rational(1)));
  std::vector<size_t> perm(n);
  for (size_t i = 0; i < n; ++i) perm[i] = i;
  for (size_t i = n; i-- > 1;) std::swap(perm[i], perm[rng.below(i + 1)]);
  mod.T.assign(n, QVec(n, Rational(0)));
  for (size_t j = 0; j < n; ++j) mod.T[perm[j]][j] = rng.below(2) ? r : -r;
  return mod;
}

namespace {

json mat_json(const QMat& m) {
  json out = json::array();
  for (const auto& row : m) {
    json r = json::array();
    for (const auto& e : row) r.push_back(to_string(e));
    out.push_back(r);
  }
  return out;
}

json norm_json(const Norm& n) {
  json out;
  if (n.quotient_base) {
    out["quotient_of"] = norm_json(*n.quotient_base);
    out["F"] = mat_json(n.F);
    return out;
  }
  out["kind"] = n.kind == NormKind::L1W ? "l1" : "linf";
  json w = json::array();
  for (const auto& e : n.weights) w.push_back(to_string(e));
  out["weights"] = w;
  if (!n.G.empty()) out["pullback"] = mat_json(n.G);
  return out;
}

json system_json(const AdmissibleSystem& sys) {
  json out;
  json levels = json::array();
  for (const auto& l : sys.levels) levels.push_back(to_string(l));
  out["levels"] = levels;
  json cxs = json::array();
  for (const auto& cx : sys.complexes) {
    json jc;
    json sp = json::array(), d = json::array();
    for (const auto& s : cx.spaces) {
      json js;
      js["dim"] = s.dim;
      js["norm"] = norm_json(s.norm);
      sp.push_back(js);
    }
    for (const auto& m : cx.d) d.push_back(mat_json(m));
    jc["spaces"] = sp;
    jc["d"] = d;
    cxs.push_back(jc);
  }
  out["complexes"] = cxs;
  json res = json::array();
  for (const auto& block : sys.res) {
    json jb = json::array();
    for (const auto& m : block) jb.push_back(mat_json(m));
    res.push_back(jb);
  }
  out["res"] = res;
  return out;
}

}  // namespace

std::string snake_instance_json(const SnakeInstance& inst) {
  json out;
  out["kind"] = "snake";
  out["k"] = to_string(inst.k);
  out["m"] = inst.m;
  out["M"] = system_json(inst.m_sys);
  out["Mp"] = system_json(inst.mp_sys);
  json f = json::array();
  for (const auto& lvl : inst.f) {
    json jl = json::array();
    for (const auto& m : lvl) jl.push_back(mat_json(m));
    f.push_back(jl);
  }
  out["f"] = f;
  return out.dump(2);
}

std::string double_instance_json(const DoubleInstance& inst) {
  json out;
  out["kind"] = "double_complex";
  out["k"] = to_string(inst.k);
  out["kp"] = to_string(inst.sys.kp);
  json levels = json::array();
  for (const auto& l : inst.sys.levels) levels.push_back(to_string(l));
  out["levels"] = levels;
  json lv = json::array();
  for (const auto& L : inst.sys.lv) {
    json jl;
    json norms = json::array(), d = json::array(), dp = json::array();
    for (size_t p = 0; p < L.M.size(); ++p) {
      json np = json::array();
      for (size_t q = 0; q < L.M[p].size(); ++q) {
        json js;
        js["dim"] = L.M[p][q].dim;
        js["norm"] = norm_json(L.M[p][q].norm);
        np.push_back(js);
      }
      norms.push_back(np);
    }
    for (const auto& row : L.d) {
      json jr = json::array();
      for (const auto& m : row) jr.push_back(mat_json(m));
      d.push_back(jr);
    }
    for (const auto& row : L.dp) {
      json jr = json::array();
      for (const auto& m : row) jr.push_back(mat_json(m));
      dp.push_back(jr);
    }
    jl["spaces"] = norms;
    jl["d"] = d;
    jl["dp"] = dp;
    lv.push_back(jl);
  }
  out["lv"] = lv;
  json res = json::array();
  for (const auto& block : inst.sys.res) {
    json jb = json::array();
    for (const auto& row : block) {
      json jr = json::array();
      for (const auto& m : row) jr.push_back(mat_json(m));
      jb.push_back(jr);
    }
    res.push_back(jb);
  }
  out["res"] = res;
  json h = json::array(), delta = json::array();
  for (const auto& m : inst.sys.h) h.push_back(mat_json(m));
  for (const auto& m : inst.sys.delta) delta.push_back(mat_json(m));
  out["h"] = h;
  out["delta"] = delta;
  return out.dump(2);
}

}  // namespace ztr
