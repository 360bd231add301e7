#pragma once

namespace gazelab {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace gazelab
