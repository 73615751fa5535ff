#pragma once

namespace ztr {

// Part of every report; bump when a change can alter report bytes.
inline constexpr const char* kVersion = "0.1.0";

}  // namespace ztr
