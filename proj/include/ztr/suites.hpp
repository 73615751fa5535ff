#pragma once

#include <string>
#include <vector>

#include "ztr/config.hpp"
#include "ztr/report.hpp"

namespace ztr {

// The named batch suites behind `ztr verify`. Unknown names throw
// domain_error; the CLI turns that into a usage error (exit 2).
std::vector<std::string> suite_names();

Report run_suite(const SuiteConfig& cfg);

}  // namespace ztr
