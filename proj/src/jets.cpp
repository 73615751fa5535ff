#include "ztr/jets.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ztr/theta.hpp"

namespace ztr {

Jet jet_add(const Jet& a, const Jet& b) {
  Jet out(std::max(a.size(), b.size()), 0.0);
  for (size_t i = 0; i < a.size(); ++i) out[i] += a[i];
  for (size_t i = 0; i < b.size(); ++i) out[i] += b[i];
  return out;
}

Jet jet_scale(const Jet& a, double s) {
  Jet out = a;
  for (auto& v : out) v *= s;
  return out;
}

Jet jet_mul(const Jet& a, const Jet& b) {
  size_t n = std::min(a.size(), b.size());
  Jet out(n, 0.0);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; i + j < n; ++j) out[i + j] += a[i] * b[j];
  return out;
}

Jet teich_expand(double x, int n, int shift) {
  Jet out(static_cast<size_t>(n), 0.0);
  if (x == 0.0) return out;
  double lg = std::log(std::fabs(x));
  double term = x;
  for (int k = 0; shift + k < n; ++k) {
    out[static_cast<size_t>(shift + k)] = term;
    term *= lg / (k + 1);
  }
  return out;
}

std::vector<double> teich_coords(const Jet& a) {
  int n = static_cast<int>(a.size());
  Jet cur = a;
  std::vector<double> out(a.size(), 0.0);
  for (int i = 0; i < n; ++i) {
    double xi = cur[static_cast<size_t>(i)];
    out[static_cast<size_t>(i)] = xi;
    Jet t = teich_expand(xi, n, i);
    for (int j = i; j < n; ++j) cur[static_cast<size_t>(j)] -= t[static_cast<size_t>(j)];
    // position i is now exactly zero: t[i] == xi by construction
  }
  return out;
}

Jet teich_to_std(const std::vector<double>& tc) {
  int n = static_cast<int>(tc.size());
  Jet out(tc.size(), 0.0);
  for (int i = 0; i < n; ++i)
    out = jet_add(out, teich_expand(tc[static_cast<size_t>(i)], n, i));
  return out;
}

double lp_norm(const JetMeasure& w) {
  double acc = 0.0;
  for (const auto& col : w.teich)
    for (double v : col) acc += std::pow(std::fabs(v), w.p);
  return acc;
}

JetMeasure pushforward(const JetMeasure& w, const std::vector<size_t>& f,
                       size_t fibers) {
  if (f.size() != w.points()) throw domain_error("pushforward: map size mismatch");
  std::vector<Jet> acc(fibers, Jet(static_cast<size_t>(w.n), 0.0));
  for (size_t s = 0; s < f.size(); ++s) {
    if (f[s] >= fibers) throw domain_error("pushforward: target out of range");
    acc[f[s]] = jet_add(acc[f[s]], teich_to_std(w.teich[s]));
  }
  JetMeasure out;
  out.n = w.n;
  out.p = w.p;
  out.teich.reserve(fibers);
  for (const auto& jet : acc) out.teich.push_back(teich_coords(jet));
  return out;
}

double collapse_ratio_uniform(size_t k) {
  JetMeasure w;
  w.n = 2;
  w.p = 1.0;
  w.teich.assign(k, {1.0 / static_cast<double>(k), 0.0});
  double in = lp_norm(w);
  JetMeasure out = pushforward(w, std::vector<size_t>(k, 0), 1);
  return lp_norm(out) / in;
}

namespace {
JetMeasure random_measure(Rng& rng, int n, double p, size_t points) {
  JetMeasure w;
  w.n = n;
  w.p = p;
  w.teich.resize(points);
  for (auto& col : w.teich) {
    col.resize(static_cast<size_t>(n));
    for (auto& v : col) v = rng.signed_log_uniform(1e-6, 1e2);
  }
  return w;
}
}  // namespace

ConstantEstimate estimate_constants(const std::string& kind, int n, double p,
                                    int trials, uint64_t seed) {
  if (n < 1) throw domain_error("estimate_constants: jet order must be >= 1");
  Rng root(seed);
  ConstantEstimate est;
  est.trials = static_cast<size_t>(trials);
  for (int t = 0; t < trials; ++t) {
    Rng rng = root.substream(static_cast<uint64_t>(t));
    double ratio = 0.0;
    std::ostringstream wit;
    if (kind == "pushforward") {
      size_t points = 2 + static_cast<size_t>(rng.below(39));
      JetMeasure w = random_measure(rng, n, p, points);
      double in = lp_norm(w);
      if (in == 0.0) continue;
      JetMeasure out = pushforward(w, std::vector<size_t>(points, 0), 1);
      ratio = lp_norm(out) / in;
      wit << "collapse of " << points << " points, trial " << t;
    } else if (kind == "addition") {
      size_t points = 1 + static_cast<size_t>(rng.below(8));
      JetMeasure u = random_measure(rng, n, p, points);
      JetMeasure v = random_measure(rng, n, p, points);
      double base = std::max(lp_norm(u), lp_norm(v));
      if (base == 0.0) continue;
      JetMeasure sum;
      sum.n = n;
      sum.p = p;
      for (size_t s = 0; s < points; ++s)
        sum.teich.push_back(
            teich_coords(jet_add(teich_to_std(u.teich[s]), teich_to_std(v.teich[s]))));
      ratio = lp_norm(sum) / base;
      wit << points << " points, trial " << t;
    } else if (kind == "scalar") {
      size_t points = 1 + static_cast<size_t>(rng.below(8));
      JetMeasure u = random_measure(rng, n, p, points);
      double in = lp_norm(u);
      if (in == 0.0) continue;
      double lambda = rng.signed_log_uniform(1e-4, 1.0);
      JetMeasure scaled;
      scaled.n = n;
      scaled.p = p;
      for (size_t s = 0; s < points; ++s)
        scaled.teich.push_back(teich_coords(jet_scale(teich_to_std(u.teich[s]), lambda)));
      ratio = lp_norm(scaled) / in;
      wit << "lambda = " << fmt_g(lambda) << ", trial " << t;
    } else {
      throw domain_error("estimate_constants: unknown kind " + kind);
    }
    if (ratio > est.sup_ratio) {
      est.sup_ratio = ratio;
      est.witness = wit.str();
    }
  }
  return est;
}

void TruncatedMeasure::set(int64_t n, size_t s, const Integer& v) {
  if (s >= S) throw domain_error("measure coefficient outside S");
  if (n < (reduced ? 1 : 0) || n > order)
    throw domain_error("measure coefficient outside truncation window");
  if (v == 0)
    a.erase({n, s});
  else
    a[{n, s}] = v;
}

Integer TruncatedMeasure::coeff(int64_t n, size_t s) const {
  auto it = a.find({n, s});
  return it == a.end() ? Integer(0) : it->second;
}

Rational measure_norm(const TruncatedMeasure& w, const Radius& r) {
  Rational nu(0);
  for (const auto& [ns, v] : w.a) nu += Rational(abs(v)) * pow_q(r.v, ns.first);
  return nu;
}

TruncatedMeasure measure_pushforward(const TruncatedMeasure& w,
                                     const std::vector<size_t>& f, size_t fibers) {
  if (f.size() != w.S) throw domain_error("measure_pushforward: map size mismatch");
  TruncatedMeasure out;
  out.S = fibers;
  out.order = w.order;
  out.reduced = w.reduced;
  for (const auto& [ns, v] : w.a) {
    if (f[ns.second] >= fibers) throw domain_error("measure_pushforward: target out of range");
    auto key = std::make_pair(ns.first, f[ns.second]);
    Integer acc = (out.a.count(key) ? out.a[key] : Integer(0)) + v;
    if (acc == 0)
      out.a.erase(key);
    else
      out.a[key] = acc;
  }
  return out;
}

NullFactorization double_null_factorize(const std::vector<std::vector<double>>& lam) {
  size_t rows = lam.size();
  size_t cols = 0;
  for (const auto& row : lam) cols = std::max(cols, row.size());
  for (const auto& row : lam)
    for (double v : row)
      if (!(v > 0.0 && v <= 1.0)) throw domain_error("double_null_factorize: entries must lie in (0,1]");
  size_t dim = std::max(rows, cols);
  // tail[i] = max over entries with max(row, col) >= i
  std::vector<double> tail(dim + 1, 0.0);
  for (size_t i = dim; i-- > 0;) {
    double m = tail[i + 1];
    if (i < rows)
      for (size_t j = 0; j <= i && j < lam[i].size(); ++j) m = std::max(m, lam[i][j]);
    for (size_t n = 0; n < std::min(i, rows); ++n)
      if (i < lam[n].size()) m = std::max(m, lam[n][i]);
    tail[i] = m;
  }
  NullFactorization out;
  out.row.resize(rows);
  out.col.resize(cols);
  for (size_t n = 0; n < rows; ++n) out.row[n] = std::sqrt(tail[n]);
  for (size_t m = 0; m < cols; ++m) out.col[m] = std::sqrt(tail[m]);
  return out;
}

namespace {
// Enumerate all integer coefficient assignments on (n, s) with n in [0, m]
// and total weighted mass <= c, feeding each completed measure to sink.
void enum_measures(const Radius& r, const Rational& budget, int64_t n, size_t s,
                   const QuotientIsoParams& P, TruncatedMeasure& cur, size_t& count,
                   const std::function<void(const TruncatedMeasure&)>& sink) {
  if (s == P.S) {
    if (n < P.m) {
      enum_measures(r, budget, n + 1, 0, P, cur, count, sink);
    } else {
      if (++count > P.cap) throw budget_exceeded("quotient_iso_check ball exceeds cap");
      sink(cur);
    }
    return;
  }
  Rational w = pow_q(r.v, n);
  Rational q = budget / w;
  Integer amax = q.get_num() / q.get_den();
  for (Integer a = -amax; a <= amax; ++a) {
    cur.set(n, s, a);
    enum_measures(r, budget - Rational(abs(a)) * w, n, s + 1, P, cur, count, sink);
  }
  cur.set(n, s, Integer(0));
}

Rational theta_component(const TruncatedMeasure& w, size_t s, const Rational& rp) {
  Rational acc(0);
  for (const auto& [ns, v] : w.a)
    if (ns.second == s) acc += Rational(v) * pow_q(rp, ns.first);
  return acc;
}
}  // namespace

std::vector<CheckRow> quotient_iso_check(const QuotientIsoParams& P) {
  if (!(P.rp > 0 && P.rp < P.r && P.r < 1))
    throw domain_error("quotient_iso_check needs 0 < rp < r < 1");
  Radius r(P.r);
  long double p_eff = std::log(to_ld(P.r)) / std::log(to_ld(P.rp));
  Rational C4 = 1 / (P.rp * (1 - P.r));
  const long double margin = 1e-9L;

  size_t count = 0;
  size_t forward_fail = 0, theta_shift_fail = 0, norm_shift_fail = 0, collapse_fail = 0;
  std::string forward_witness, structure_witness;
  TruncatedMeasure cur;
  cur.S = P.S;
  cur.order = P.m;
  size_t seen = 0;

  auto sink = [&](const TruncatedMeasure& w) {
    ++seen;
    // Forward: componentwise theta lands in the lp <= c ball (C3 = 1 story).
    long double mass = 0.0L;
    std::vector<Rational> z(P.S);
    for (size_t s = 0; s < P.S; ++s) {
      z[s] = theta_component(w, s, P.rp);
      long double az = fabsl(to_ld(z[s]));
      if (az > 0) mass += powl(az, p_eff);
    }
    if (mass > to_ld(P.c) + margin) {
      if (forward_fail++ == 0) {
        std::ostringstream os;
        os << "lp mass " << static_cast<double>(mass) << " at measure #" << seen;
        forward_witness = os.str();
      }
    }
    // Structure maps, exact: multiplication by T scales theta by rp and the
    // norm by r; collapsing S to a point commutes with theta.
    TruncatedMeasure tw;
    tw.S = w.S;
    tw.order = w.order + 1;
    for (const auto& [ns, v] : w.a) tw.set(ns.first + 1, ns.second, v);
    for (size_t s = 0; s < P.S; ++s)
      if (theta_component(tw, s, P.rp) != P.rp * z[s]) ++theta_shift_fail;
    if (measure_norm(tw, r) != P.r * measure_norm(w, r)) ++norm_shift_fail;
    TruncatedMeasure col = measure_pushforward(w, std::vector<size_t>(P.S, 0), 1);
    Rational zsum(0);
    for (size_t s = 0; s < P.S; ++s) zsum += z[s];
    if (theta_component(col, 0, P.rp) != zsum) ++collapse_fail;
  };
  enum_measures(r, P.c, 0, 0, P, cur, count, sink);

  std::vector<CheckRow> rows;
  {
    CheckRow row;
    row.id = "forward-lp-mass";
    row.pass = forward_fail == 0;
    row.measured = std::to_string(forward_fail) + " violations / " + std::to_string(seen);
    row.expected = "sum_s |theta(w_s)|^p <= c + 1e-9";
    row.witness = forward_witness;
    rows.push_back(row);
  }
  {
    CheckRow row;
    row.id = "structure-maps-exact";
    row.pass = theta_shift_fail == 0 && norm_shift_fail == 0 && collapse_fail == 0;
    row.measured = "theta-shift " + std::to_string(theta_shift_fail) + ", norm-shift " +
                   std::to_string(norm_shift_fail) + ", collapse " + std::to_string(collapse_fail);
    row.expected = "all exact identities hold";
    rows.push_back(row);
  }

  // Backward: lift lp vectors componentwise by the bounded digit expansion.
  Rng rng(P.seed);
  size_t back_fail = 0, round_fail = 0;
  std::string back_witness;
  for (int t = 0; t < P.backward_samples; ++t) {
    Rng sub = rng.substream(static_cast<uint64_t>(t));
    // Dyadic rational z_s in [-1, 1], rejected until the lp mass fits in c.
    std::vector<Rational> z(P.S);
    long double mass;
    int attempts = 0;
    do {
      mass = 0.0L;
      for (size_t s = 0; s < P.S; ++s) {
        long num = sub.range(-1024, 1024);
        z[s] = Rational(num, 1024);
        long double az = fabsl(to_ld(z[s]));
        if (az > 0) mass += powl(az, p_eff);
      }
      if (++attempts > 1000) throw domain_error("quotient_iso_check: sampling stuck");
    } while (mass > to_ld(P.c) * (1.0L - 1e-6L));

    Rational nu_total(0);
    Rational bound_exact(0);  // C4 * sum_s r^(n_s), the proof-side bound
    bool round_ok = true;
    for (size_t s = 0; s < P.S; ++s) {
      if (z[s] == 0) continue;
      ExactLaurent g = bounded_digit_expand(z[s], P.rp, 40);
      nu_total += weighted_norm(g, r);
      // first exponent realizes r^(n_s) <= |z_s|^p
      int64_t n0 = g.min_exp();
      bound_exact += C4 * pow_q(P.r, n0);
      // round trip: |z - theta(g)| < rp^(last exponent)
      Rational resid = z[s];
      for (const auto& [n, a] : g.c) resid -= Rational(a) * pow_q(P.rp, n);
      if (!(abs_q(resid) < pow_q(P.rp, g.max_exp()))) round_ok = false;
    }
    bool mass_ok = to_ld(nu_total) <= to_ld(C4) * mass + margin;
    bool exact_ok = nu_total <= bound_exact;
    if (!(mass_ok && exact_ok)) {
      if (back_fail++ == 0) {
        std::ostringstream os;
        os << "sample " << t << ": nu " << static_cast<double>(to_ld(nu_total));
        back_witness = os.str();
      }
    }
    if (!round_ok) ++round_fail;
  }
  {
    CheckRow row;
    row.id = "backward-digit-lift";
    row.pass = back_fail == 0;
    row.measured = std::to_string(back_fail) + " violations / " + std::to_string(P.backward_samples);
    row.expected = "nu_r(lift) <= C4 * lp mass, C4 = " + to_string(C4);
    row.witness = back_witness;
    rows.push_back(row);
  }
  {
    CheckRow row;
    row.id = "backward-round-trip";
    row.pass = round_fail == 0;
    row.measured = std::to_string(round_fail) + " violations / " + std::to_string(P.backward_samples);
    row.expected = "|z - theta(lift)| < rp^(last digit exponent)";
    rows.push_back(row);
  }
  return rows;
}

}  // namespace ztr
