#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "ztr/numeric.hpp"

namespace ztr {

using ConfigSections = std::map<std::string, std::map<std::string, std::string>>;

// `key = value` lines grouped under [suite] headers. '#' or ';' start a
// comment, blank lines are skipped. Values keep inner spaces.
ConfigSections parse_config_text(const std::string& text);
ConfigSections parse_config_file(const std::string& path);

// Resolved parameters for one suite run: the suite's config section plus CLI
// overrides, with typed accessors. Unknown keys are kept; they end up echoed
// in the report so a typo in a config file is visible in the output.
struct SuiteConfig {
  std::string suite;
  uint64_t seed = 1;
  std::string out;
  std::map<std::string, std::string> params;

  bool has(const std::string& key) const { return params.count(key) > 0; }
  std::string get(const std::string& key, const std::string& dflt) const;
  long get_long(const std::string& key, long dflt) const;
  double get_double(const std::string& key, double dflt) const;
  Rational get_rational(const std::string& key, const Rational& dflt) const;
  // ZTR_BUDGET_CAP in the environment beats both the config and the default
  size_t get_cap(const std::string& key, size_t dflt) const;
};

SuiteConfig make_suite_config(const std::string& suite, const ConfigSections& file,
                              uint64_t seed, const std::string& out);

}  // namespace ztr
