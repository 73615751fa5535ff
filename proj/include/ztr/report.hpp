#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace ztr {

struct CheckRow {
  std::string id;
  bool pass = false;
  bool skipped = false;  // a budget cap stopped the check; neither pass nor fail
  std::string measured;
  std::string expected;
  std::string witness;
};

struct Report {
  std::string suite;
  std::string version;
  uint64_t seed = 0;
  std::map<std::string, std::string> params;  // resolved configuration
  std::vector<CheckRow> rows;

  size_t passes() const;
  size_t fails() const;
  size_t skips() const;
};

// Byte-stable serializations: no timestamps, no locale dependence, fixed key
// order. Wall time is deliberately not part of either form so that repeated
// runs with the same (config, seed, version) compare equal.
std::string emit_json(const Report& r);
std::string emit_text(const Report& r);

}  // namespace ztr
