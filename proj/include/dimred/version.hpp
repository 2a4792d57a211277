#pragma once

namespace dimred {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace dimred
