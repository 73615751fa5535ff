#include "doctest.h"

#include <cstdlib>

#include "ztr/config.hpp"
#include "ztr/report.hpp"
#include "ztr/suites.hpp"
#include "ztr/vendor_json.hpp"
#include "ztr/version.hpp"

using namespace ztr;

TEST_CASE("config text parses sections, comments, inner spaces") {
  auto cs = parse_config_text(
      "# global comment\n"
      "[entropy]\n"
      "grid = 50\n"
      "note = two  words\n"
      "\n"
      "[keylemma]  ; trailing comment\n"
      "count = 7\n");
  CHECK(cs.at("entropy").at("grid") == "50");
  CHECK(cs.at("entropy").at("note") == "two  words");
  CHECK(cs.at("keylemma").at("count") == "7");

  CHECK_THROWS_AS(parse_config_text("[entropy]\nno equals sign\n"), parse_error);
  CHECK_THROWS_AS(parse_config_text("orphan = 1\n"), parse_error);  // key before any section
}

TEST_CASE("suite config resolves one section with typed accessors") {
  auto cs = parse_config_text("[entropy]\ngrid = 12\neps = 3/4\n");
  auto cfg = make_suite_config("entropy", cs, 42, "");
  CHECK(cfg.suite == "entropy");
  CHECK(cfg.seed == 42);
  CHECK(cfg.get_long("grid", 7) == 12);
  CHECK(cfg.get_long("missing", 7) == 7);
  CHECK(cfg.get_rational("eps", Rational(0)) == Rational(3, 4));
  CHECK(cfg.get("note", "dflt") == "dflt");

  // a section for another suite does not leak in
  auto other = make_suite_config("keylemma", cs, 1, "");
  CHECK(!other.has("grid"));
}

TEST_CASE("budget cap resolution order: env, config, default") {
  auto cs = parse_config_text("[tinv]\ncap = 9\n");
  auto cfg = make_suite_config("tinv", cs, 1, "");
  unsetenv("ZTR_BUDGET_CAP");
  CHECK(cfg.get_cap("cap", 5) == 9);
  setenv("ZTR_BUDGET_CAP", "777", 1);
  CHECK(cfg.get_cap("cap", 5) == 777);
  unsetenv("ZTR_BUDGET_CAP");
  auto bare = make_suite_config("tinv", ConfigSections{}, 1, "");
  CHECK(bare.get_cap("cap", 5) == 5);
}

TEST_CASE("text report format is fixed") {
  Report r;
  r.suite = "demo";
  r.version = "0.1.0";
  r.seed = 3;
  r.params["alpha"] = "1";
  r.rows.push_back({"first", true, false, "2", "2", ""});
  r.rows.push_back({"second", false, false, "5", "4", "offending input"});
  r.rows.push_back({"third", false, true, "", "", "cap hit"});

  CHECK(emit_text(r) ==
        "suite: demo\n"
        "version: 0.1.0\n"
        "seed: 3\n"
        "param alpha = 1\n"
        "PASS first\n"
        "  measured: 2\n"
        "  expected: 2\n"
        "FAIL second\n"
        "  measured: 5\n"
        "  expected: 4\n"
        "  witness: offending input\n"
        "SKIP third\n"
        "  witness: cap hit\n"
        "FAIL 1/3 (1 skipped)\n");

  auto j = nlohmann::json::parse(emit_json(r));
  CHECK(j["suite"] == "demo");
  CHECK(j["rows"][0]["status"] == "pass");
  CHECK(j["rows"][1]["status"] == "fail");
  CHECK(j["rows"][2]["status"] == "skipped-budget");
  CHECK(j["summary"]["pass"] == 1);
  CHECK(j["summary"]["fail"] == 1);
  CHECK(j["summary"]["skipped"] == 1);
}

TEST_CASE("suite registry and dispatch") {
  auto names = suite_names();
  CHECK(names.size() == 9);
  CHECK(names.front() == "entropy");

  SuiteConfig bad;
  bad.suite = "no-such-suite";
  CHECK_THROWS_AS(run_suite(bad), domain_error);
}

TEST_CASE("a suite run is a pure function of config and seed") {
  auto cs = parse_config_text(
      "[entropy]\n"
      "grid = 40\n"
      "random = 400\n"
      "trials = 30\n"
      "pairs = 60\n"
      "hmax = 64\n");
  auto cfg = make_suite_config("entropy", cs, 11, "");
  auto r1 = run_suite(cfg);
  auto r2 = run_suite(cfg);
  CHECK(emit_json(r1) == emit_json(r2));
  CHECK(emit_text(r1) == emit_text(r2));

  CHECK(r1.suite == "entropy");
  CHECK(r1.version == kVersion);
  CHECK(r1.seed == 11);
  CHECK(r1.params.at("grid") == "40");
  CHECK(r1.fails() == 0);

  // a different seed moves the sampled rows but the suite still passes
  auto cfg2 = make_suite_config("entropy", cs, 12, "");
  auto r3 = run_suite(cfg2);
  CHECK(r3.fails() == 0);
}
