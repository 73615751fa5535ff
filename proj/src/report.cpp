#include "ztr/report.hpp"

#include <sstream>

#include "ztr/vendor_json.hpp"

namespace ztr {

namespace {

const char* status_of(const CheckRow& r) {
  if (r.skipped) return "skipped-budget";
  return r.pass ? "pass" : "fail";
}

}  // namespace

size_t Report::passes() const {
  size_t n = 0;
  for (const auto& r : rows) n += !r.skipped && r.pass;
  return n;
}

size_t Report::fails() const {
  size_t n = 0;
  for (const auto& r : rows) n += !r.skipped && !r.pass;
  return n;
}

size_t Report::skips() const {
  size_t n = 0;
  for (const auto& r : rows) n += r.skipped;
  return n;
}

std::string emit_json(const Report& r) {
  nlohmann::ordered_json j;
  j["suite"] = r.suite;
  j["version"] = r.version;
  j["seed"] = r.seed;
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  for (const auto& [k, v] : r.params) params[k] = v;  // std::map iterates sorted
  j["params"] = params;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& row : r.rows) {
    nlohmann::ordered_json jr;
    jr["id"] = row.id;
    jr["status"] = status_of(row);
    jr["measured"] = row.measured;
    jr["expected"] = row.expected;
    jr["witness"] = row.witness;
    rows.push_back(jr);
  }
  j["rows"] = rows;
  j["summary"] = {{"pass", r.passes()}, {"fail", r.fails()}, {"skipped", r.skips()}};
  return j.dump(2) + "\n";
}

std::string emit_text(const Report& r) {
  std::ostringstream out;
  out << "suite: " << r.suite << "\n";
  out << "version: " << r.version << "\n";
  out << "seed: " << r.seed << "\n";
  for (const auto& [k, v] : r.params) out << "param " << k << " = " << v << "\n";
  for (const auto& row : r.rows) {
    out << (row.skipped ? "SKIP" : row.pass ? "PASS" : "FAIL") << " " << row.id;
    if (!row.measured.empty()) out << "\n  measured: " << row.measured;
    if (!row.expected.empty()) out << "\n  expected: " << row.expected;
    if (!row.witness.empty()) out << "\n  witness: " << row.witness;
    out << "\n";
  }
  out << (r.fails() == 0 ? "PASS " : "FAIL ") << r.passes() << "/" << r.rows.size();
  if (r.skips() > 0) out << " (" << r.skips() << " skipped)";
  out << "\n";
  return out.str();
}

}  // namespace ztr
