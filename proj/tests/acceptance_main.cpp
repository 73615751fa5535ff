// Final gate: runs the shipped suites at their full configurations and grades
// the project's acceptance list, one PASS/FAIL line per criterion. Exit code
// 0 only when every criterion holds.

#include <chrono>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "ztr/config.hpp"
#include "ztr/report.hpp"
#include "ztr/suites.hpp"
#include "ztr/theta.hpp"

using namespace ztr;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

SuiteConfig cfg_for(const std::string& suite,
                    std::map<std::string, std::string> params, uint64_t seed) {
  SuiteConfig cfg;
  cfg.suite = suite;
  cfg.seed = seed;
  cfg.params = std::move(params);
  return cfg;
}

// Every row whose id contains `key` passed outright (skips count as not run,
// hence as failure of the criterion). Requires at least one matching row.
bool rows_pass(const Report& rep, const std::string& key, std::string& detail) {
  size_t matched = 0;
  for (const auto& row : rep.rows) {
    if (row.id.find(key) == std::string::npos) continue;
    ++matched;
    if (row.skipped) {
      detail = row.id + " skipped (" + row.witness + ")";
      return false;
    }
    if (!row.pass) {
      detail = row.id + ": measured " + row.measured + ", expected " + row.expected;
      return false;
    }
  }
  if (matched == 0) {
    detail = "no row matches '" + key + "'";
    return false;
  }
  return true;
}

struct Gate {
  std::string name;
  bool pass = false;
  std::string detail;
};

}  // namespace

int main() {
  std::vector<Gate> gates;
  auto grade = [&](const std::string& name, bool pass, const std::string& detail) {
    gates.push_back({name, pass, detail});
    std::printf("%s %s%s%s\n", pass ? "PASS" : "FAIL", name.c_str(),
                (!pass && !detail.empty()) ? ": " : "",
                (!pass && !detail.empty()) ? detail.c_str() : "");
    std::fflush(stdout);
  };

  // 1. integer power series with a prescribed zero, three (r, x) pairs,
  //    certificate inequality exact, enclosure width <= 1e-10, under 10 s
  {
    auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    std::string detail;
    const Rational width_cap = pow_q(Rational(1, 10), 10);
    const std::pair<Rational, Rational> cases[] = {
        {Rational(1, 2), Rational(1, 2)},
        {Rational(1, 2), Rational(3, 10)},
        {Rational(7, 10), Rational(1, 2)},
    };
    for (auto& [r, x] : cases) {
      auto cert = construct_generator(x, Rational(0), Radius(r), 200);
      bool head = cert.f.coeff(0) == 1;
      for (int64_t n = 1; n < cert.n_vanish; ++n) head = head && cert.f.coeff(n) == 0;
      bool certificate = pow_q(r, cert.n_vanish) / (2 * (1 - r)) < 1;
      auto iv = theta_eval(cert.f, RealPoint(x), cert.coeff_bound);
      bool enclosed = iv.contains(Rational(0)) && iv.width() <= width_cap;
      if (!(head && certificate && enclosed)) {
        ok = false;
        detail = "r=" + to_string(r) + " x=" + to_string(x) +
                 (head ? "" : " head") + (certificate ? "" : " certificate") +
                 (enclosed ? "" : " enclosure");
      }
    }
    double dt = seconds_since(t0);
    if (dt >= 10.0) {
      ok = false;
      detail += " runtime " + fmt_g(dt) + " s";
    }
    grade("generator-three-points", ok, detail);
  }

  // 2. theta at x = 1/2 of 2 - T^{-1} is exactly zero
  {
    auto f = JetLaurent::from_exact(parse_series("-1*T^-1 + 2*T^0"));
    auto iv = theta_eval(f, RealPoint(Rational(1, 2)), Rational(0));
    bool ok = iv.lo == 0 && iv.hi == 0;
    grade("specialization-exact-zero", ok,
          ok ? "" : "[" + to_string(iv.lo) + ", " + to_string(iv.hi) + "]");
  }

  // 3, 4. the constants sweep at r = 1/2, order-8 ball, both exponents
  {
    auto rep = run_suite(cfg_for("lec7-constants",
                                 {{"m", "8"}, {"samples", "1000"}}, 1));
    std::string d3, d4;
    grade("norm-domination-exhaustive", rows_pass(rep, "c3-exhaustive-ball", d3), d3);
    grade("digit-lift-norm-bound", rows_pass(rep, "c4-digit-lift", d4), d4);
  }

  // 5. entropy defect sup and uniform-measure entropy at defaults
  {
    auto rep = run_suite(cfg_for("entropy", {}, 1));
    std::string d;
    bool ok = rows_pass(rep, "defect-grid-sup", d) &&
              rows_pass(rep, "defect-random-sup", d) &&
              rows_pass(rep, "H-uniform-log", d);
    grade("entropy-defect-and-uniform", ok, d);
  }

  // 6. pushforward growth 1 + log k past 5, and the p = 1/2 empirical sup
  {
    auto rep = run_suite(cfg_for("stableimage", {}, 1));
    std::string d;
    bool ok = rows_pass(rep, "collapse-ratio-closed-form", d) &&
              rows_pass(rep, "pushforward-n2-p1-family", d) &&
              rows_pass(rep, "pushforward-n2-phalf-bounded", d);
    grade("pushforward-growth", ok, d);
  }

  // 7. complex identities for the four groups, homology values, six-term
  //    differential, under 60 s
  {
    auto t0 = std::chrono::steady_clock::now();
    auto rep = run_suite(cfg_for("qcomplex", {}, 1));
    double dt = seconds_since(t0);
    std::string d;
    bool ok = rows_pass(rep, "dd-zero-", d) && rows_pass(rep, "homotopy-", d) &&
              rows_pass(rep, "h0-iso-", d) && rows_pass(rep, "h1-additivity", d) &&
              rows_pass(rep, "d2-six-term", d);
    if (ok && dt >= 60.0) {
      ok = false;
      d = "runtime " + fmt_g(dt) + " s";
    }
    grade("maclane-complex-identities", ok, d);
  }

  // 8, 9. key decomposition instances and the planar Hilbert basis oracle
  {
    auto rep = run_suite(cfg_for("keylemma", {}, 1));
    std::string d8, d9;
    bool ok8 = rows_pass(rep, "keylemma-instances", d8) &&
               rows_pass(rep, "same-sign-decompose", d8);
    grade("key-decomposition-bound", ok8, d8);
    grade("hilbert-basis-oracle", rows_pass(rep, "hilbert-2d-oracle", d9), d9);
  }

  // 10. shift equation: exact residual, norm budget, forward bound
  {
    auto rep = run_suite(cfg_for("tinv", {}, 1));
    std::string d;
    grade("shift-equation-solver", rows_pass(rep, "tinv-", d), d);
  }

  // 11. snake and double-complex transfers: 200 accepted instances each,
  //     zero conclusion violations
  {
    auto snake = run_suite(cfg_for("snake", {}, 1));
    auto dbl = run_suite(cfg_for("propkey", {}, 1));
    std::string d;
    bool ok = rows_pass(snake, "instances-accepted", d) &&
              rows_pass(snake, "conclusion-constant", d) &&
              rows_pass(dbl, "instances-accepted", d) &&
              rows_pass(dbl, "conclusion-constant", d);
    grade("exactness-transfer", ok, d);
  }

  // 12. byte-identical reports on a double run of every suite
  {
    const std::map<std::string, std::map<std::string, std::string>> reduced = {
        {"entropy", {{"grid", "200"}, {"random", "5000"}, {"trials", "100"},
                     {"pairs", "500"}, {"hmax", "500"}}},
        {"lec7-constants", {{"m", "4"}, {"samples", "100"}, {"order", "60"}}},
        {"stableimage", {{"trials", "100"}, {"samples", "2000"}, {"matrices", "5"}}},
        {"qcomplex", {{"tuple_cap", "5000"}, {"tuple_samples", "100"}}},
        {"keylemma", {{"count", "20"}, {"trials", "30"}, {"max_entry", "3"}}},
        {"snake", {{"count", "10"}, {"probes", "6"}}},
        {"tinv", {{"depth", "3"}, {"forward_samples", "5"}}},
        {"propkey", {{"count", "10"}, {"probes", "6"}}},
        {"quotient-iso", {{"m", "3"}, {"backward_samples", "10"}}},
    };
    bool ok = true;
    std::string d;
    for (const auto& name : suite_names()) {
      auto it = reduced.find(name);
      auto cfg = cfg_for(name, it == reduced.end() ? std::map<std::string, std::string>{}
                                                   : it->second, 17);
      auto a = emit_json(run_suite(cfg));
      auto b = emit_json(run_suite(cfg));
      if (a != b) {
        ok = false;
        d = name + " produced different bytes on the second run";
        break;
      }
    }
    grade("reports-byte-identical", ok, d);
  }

  size_t passed = 0;
  for (auto& g : gates) passed += g.pass;
  std::printf("acceptance: %zu/%zu criteria\n", passed, gates.size());
  return passed == gates.size() ? 0 : 1;
}
