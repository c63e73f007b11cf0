#pragma once

namespace cifg {

inline constexpr const char* kVersion = "cifg 0.1.0";

}  // namespace cifg
