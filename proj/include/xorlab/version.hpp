#pragma once

namespace xorlab {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace xorlab
