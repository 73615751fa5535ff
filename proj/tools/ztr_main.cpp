#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ztr/config.hpp"
#include "ztr/jets.hpp"
#include "ztr/laurent.hpp"
#include "ztr/report.hpp"
#include "ztr/suites.hpp"
#include "ztr/theta.hpp"

namespace {

// exit codes: 0 all rows pass, 1 any fail (or a domain error), 2 usage
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

std::map<std::string, std::string> keyvals(const std::vector<std::string>& args) {
  std::map<std::string, std::string> out;
  for (const auto& a : args) {
    auto eq = a.find('=');
    if (eq == std::string::npos || eq == 0)
      throw ztr::parse_error("expected key=value, got '" + a + "'");
    out[a.substr(0, eq)] = a.substr(eq + 1);
  }
  return out;
}

std::string need(const std::map<std::string, std::string>& kv, const std::string& key) {
  auto it = kv.find(key);
  if (it == kv.end()) throw ztr::parse_error("missing " + key + "=...");
  return it->second;
}

long parse_long(const std::string& s) {
  size_t pos = 0;
  long v = 0;
  try {
    v = std::stol(s, &pos);
  } catch (const std::exception&) {
    throw ztr::parse_error("not an integer: '" + s + "'");
  }
  if (pos != s.size()) throw ztr::parse_error("not an integer: '" + s + "'");
  return v;
}

uint64_t parse_u64(const std::string& s) {
  size_t pos = 0;
  uint64_t v = 0;
  try {
    v = std::stoull(s, &pos);
  } catch (const std::exception&) {
    throw ztr::parse_error("not an unsigned integer: '" + s + "'");
  }
  if (pos != s.size()) throw ztr::parse_error("not an unsigned integer: '" + s + "'");
  return v;
}

ztr::Integer parse_int(const std::string& s) {
  try {
    return ztr::Integer(s);
  } catch (const std::exception&) {
    throw ztr::parse_error("not an integer: '" + s + "'");
  }
}

// theta of a finitely supported series at a rational point, exact
ztr::Rational eval_exact(const ztr::ExactLaurent& f, const ztr::Rational& x) {
  ztr::Rational acc(0);
  for (const auto& [n, a] : f.c) acc += ztr::Rational(a) * ztr::pow_q(x, long(n));
  return acc;
}

int run_verify(const std::string& suite, const std::string& config_path,
               bool seed_given, uint64_t cli_seed, const std::string& out_path,
               bool json_stdout) {
  auto names = ztr::suite_names();
  if (std::find(names.begin(), names.end(), suite) == names.end()) {
    std::cerr << "unknown suite: " << suite << "\nknown suites:";
    for (const auto& n : names) std::cerr << " " << n;
    std::cerr << "\n";
    return kExitUsage;
  }

  ztr::ConfigSections sections;
  if (!config_path.empty()) sections = ztr::parse_config_file(config_path);
  ztr::SuiteConfig cfg = ztr::make_suite_config(suite, sections, 1, out_path);
  if (cfg.has("seed")) cfg.seed = parse_u64(cfg.get("seed", "1"));
  if (seed_given) cfg.seed = cli_seed;
  cfg.params["seed"] = std::to_string(cfg.seed);

  auto t0 = std::chrono::steady_clock::now();
  ztr::Report rep = ztr::run_suite(cfg);
  std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
  // wall time goes to stderr only; the report bytes stay reproducible
  std::cerr << "# " << suite << " finished in " << dt.count() << " s\n";

  if (json_stdout)
    std::cout << ztr::emit_json(rep);
  else
    std::cout << ztr::emit_text(rep);
  if (!out_path.empty()) {
    std::ofstream f(out_path, std::ios::binary);
    if (!f) {
      std::cerr << "cannot open " << out_path << " for writing\n";
      return kExitFail;
    }
    f << ztr::emit_json(rep);
  }
  return rep.fails() > 0 ? kExitFail : 0;
}

int run_expand(bool real, bool padic, bool bounded, const std::vector<std::string>& args) {
  if (int(real) + int(padic) + int(bounded) != 1)
    throw ztr::parse_error("pick exactly one of --real, --padic, --bounded");
  auto kv = keyvals(args);

  if (real) {
    ztr::Rational y = ztr::parse_rational(need(kv, "y"));
    ztr::Rational x = ztr::parse_rational(need(kv, "x"));
    long N = parse_long(need(kv, "N"));
    int terms = kv.count("terms") ? int(parse_long(kv.at("terms"))) : 32;
    ztr::ExactLaurent f = ztr::real_digit_expand(y, x, N, terms);
    std::cout << ztr::to_text(f) << "\n";
    ztr::Rational rem = y - eval_exact(f, x);
    std::cout << "remainder " << ztr::to_string(rem) << "\n";
    return 0;
  }
  if (bounded) {
    ztr::Rational z = ztr::parse_rational(need(kv, "z"));
    ztr::Rational x = ztr::parse_rational(need(kv, "x"));
    int terms = int(parse_long(need(kv, "terms")));
    ztr::ExactLaurent f = ztr::bounded_digit_expand(z, x, terms);
    std::cout << ztr::to_text(f) << "\n";
    ztr::Rational rem = z - eval_exact(f, x);
    std::cout << "remainder " << ztr::to_string(rem) << "\n";
    return 0;
  }
  ztr::Integer p = parse_int(need(kv, "p"));
  ztr::Integer x = parse_int(need(kv, "x"));
  ztr::Integer y = parse_int(need(kv, "y"));
  long K = parse_long(need(kv, "K"));
  ztr::PadicPoint pt(p, x, K);
  ztr::ExactLaurent f = ztr::padic_digit_expand(y, pt);
  std::cout << ztr::to_text(f) << "\n";
  ztr::Integer got = ztr::padic_theta(f, pt);
  ztr::Integer mod = ztr::pow_z(p, static_cast<unsigned long>(K));
  ztr::Integer diff = ((got - y) % mod + mod) % mod;
  std::cout << "residual " << ztr::to_string(diff) << " mod " << ztr::to_string(p) << "^"
            << K << "\n";
  return 0;
}

int run_generator(const std::string& xs, const std::string& rs, long order) {
  ztr::Rational x = ztr::parse_rational(xs);
  ztr::Rational r = ztr::parse_rational(rs);
  ztr::GeneratorCertificate cert =
      ztr::construct_generator(x, ztr::Rational(0), ztr::Radius(r), order);
  std::cout << ztr::to_json(cert.f) << "\n";
  std::cerr << "n_vanish = " << cert.n_vanish
            << ", coeff_bound = " << ztr::to_string(cert.coeff_bound)
            << ", residual_bound = " << ztr::to_string(cert.residual_bound) << "\n";
  return 0;
}

int run_theta(const std::string& series, const std::string& xs) {
  ztr::ExactLaurent f = ztr::parse_series(series);
  ztr::Rational x = ztr::parse_rational(xs);
  ztr::Interval iv = ztr::theta_eval(ztr::JetLaurent::from_exact(f), ztr::RealPoint(x),
                                     ztr::Rational(0));
  if (iv.lo == iv.hi)
    std::cout << "theta = " << ztr::to_string(iv.lo) << "\n";
  else
    std::cout << "theta in [" << ztr::to_string(iv.lo) << ", " << ztr::to_string(iv.hi)
              << "]\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact checks for weighted Laurent series, lp jets, and normed complexes"};
  app.require_subcommand(1);

  std::string suite, config_path, out_path;
  uint64_t seed = 1;
  bool json_stdout = false;
  auto* verify = app.add_subcommand("verify", "run a named check suite");
  verify->add_option("suite", suite, "suite name")->required();
  verify->add_option("--config", config_path, "key = value sections per suite");
  auto* seed_opt = verify->add_option("--seed", seed, "root seed (beats the config file)");
  verify->add_option("--out", out_path, "write the JSON report here");
  verify->add_flag("--json", json_stdout, "print JSON instead of text");

  bool real = false, padic = false, bounded = false;
  std::vector<std::string> expand_args;
  auto* expand = app.add_subcommand("expand", "digit expansions, printed canonically");
  expand->add_flag("--real", real, "greedy base-x expansion of y with digits in [0, N)");
  expand->add_flag("--padic", padic, "p-adic digits of y at x, mod p^K");
  expand->add_flag("--bounded", bounded, "signed expansion of z with digits up to ceil(1/x)");
  expand->add_option("args", expand_args, "key=value arguments");

  std::string gen_x, gen_r;
  long gen_order = 200;
  auto* generator = app.add_subcommand("generator", "integer series with theta_x = 0");
  generator->add_option("--x", gen_x, "evaluation point in (0, 1)")->required();
  generator->add_option("--r", gen_r, "weight radius")->required();
  generator->add_option("--order", gen_order, "truncation order");

  std::string theta_series, theta_x;
  auto* theta = app.add_subcommand("theta", "evaluate a finite series exactly");
  theta->add_option("--series", theta_series, "text form, e.g. '2*T^0 + -1*T^-1'")->required();
  theta->add_option("--x", theta_x, "evaluation point")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*verify)
      return run_verify(suite, config_path, seed_opt->count() > 0, seed, out_path,
                        json_stdout);
    if (*expand) return run_expand(real, padic, bounded, expand_args);
    if (*generator) return run_generator(gen_x, gen_r, gen_order);
    if (*theta) return run_theta(theta_series, theta_x);
  } catch (const ztr::parse_error& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFail;
  }
  return kExitUsage;
}
