#pragma once

namespace pav {

inline constexpr const char* kToolName = "pav";
inline constexpr const char* kToolVersion = "1.0.0";
inline constexpr const char* kRngName = "pcg64";

}  // namespace pav
