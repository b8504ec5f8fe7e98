#pragma once

#include <string_view>

namespace kgen {

inline constexpr std::string_view kArtifactName = "kgen";
inline constexpr std::string_view kVersion = "0.1.0";

}  // namespace kgen
