#pragma once

namespace devnet {

inline constexpr const char* kToolName = "devnet";
inline constexpr const char* kVersion = "0.1.0";

}  // namespace devnet
