#pragma once

namespace saliqa {

inline constexpr const char* kToolkitName = "saliqa";
inline constexpr const char* kToolkitVersion = "0.1.0";

}  // namespace saliqa
