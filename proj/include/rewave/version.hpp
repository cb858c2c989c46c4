#pragma once

namespace rewave {

inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace rewave
