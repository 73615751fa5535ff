#pragma once

// The vendored single-header nlohmann/json lives at vendor/json.hpp, without
// the usual nlohmann/ directory prefix.
#include <json.hpp>
