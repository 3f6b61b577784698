#pragma once

namespace geocentroid {

inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace geocentroid
