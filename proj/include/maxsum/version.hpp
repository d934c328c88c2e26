#pragma once

namespace maxsum {

inline constexpr const char* k_version = "0.1.0";

}  // namespace maxsum
