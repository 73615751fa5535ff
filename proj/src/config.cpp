#include "ztr/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

namespace ztr {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

}  // namespace

ConfigSections parse_config_text(const std::string& text) {
  ConfigSections out;
  std::istringstream in(text);
  std::string line, section;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    size_t cut = line.find_first_of("#;");
    if (cut != std::string::npos) line.resize(cut);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw parse_error("config line " + std::to_string(lineno) + ": unterminated section");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty())
        throw parse_error("config line " + std::to_string(lineno) + ": empty section name");
      out[section];  // a section may be present but empty
      continue;
    }
    size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw parse_error("config line " + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw parse_error("config line " + std::to_string(lineno) + ": empty key");
    if (section.empty())
      throw parse_error("config line " + std::to_string(lineno) + ": key outside any [suite]");
    out[section][key] = value;
  }
  return out;
}

ConfigSections parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parse_error("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

std::string SuiteConfig::get(const std::string& key, const std::string& dflt) const {
  auto it = params.find(key);
  return it == params.end() ? dflt : it->second;
}

long SuiteConfig::get_long(const std::string& key, long dflt) const {
  auto it = params.find(key);
  if (it == params.end()) return dflt;
  try {
    size_t pos = 0;
    long v = std::stol(it->second, &pos);
    if (pos != it->second.size()) throw std::invalid_argument(key);
    return v;
  } catch (const std::exception&) {
    throw parse_error("config key " + key + ": not an integer: " + it->second);
  }
}

double SuiteConfig::get_double(const std::string& key, double dflt) const {
  auto it = params.find(key);
  if (it == params.end()) return dflt;
  try {
    size_t pos = 0;
    double v = std::stod(it->second, &pos);
    if (pos != it->second.size()) throw std::invalid_argument(key);
    return v;
  } catch (const std::exception&) {
    throw parse_error("config key " + key + ": not a number: " + it->second);
  }
}

Rational SuiteConfig::get_rational(const std::string& key, const Rational& dflt) const {
  auto it = params.find(key);
  if (it == params.end()) return dflt;
  return parse_rational(it->second);
}

size_t SuiteConfig::get_cap(const std::string& key, size_t dflt) const {
  size_t v = dflt;
  auto it = params.find(key);
  if (it != params.end()) v = static_cast<size_t>(get_long(key, long(dflt)));
  if (const char* env = std::getenv("ZTR_BUDGET_CAP")) {
    char* end = nullptr;
    unsigned long long e = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && e > 0) v = static_cast<size_t>(e);
  }
  if (v == 0) throw parse_error("config key " + key + ": cap must be positive");
  return v;
}

SuiteConfig make_suite_config(const std::string& suite, const ConfigSections& file,
                              uint64_t seed, const std::string& out) {
  SuiteConfig cfg;
  cfg.suite = suite;
  cfg.seed = seed;
  cfg.out = out;
  auto it = file.find(suite);
  if (it != file.end()) cfg.params = it->second;
  return cfg;
}

}  // namespace ztr
