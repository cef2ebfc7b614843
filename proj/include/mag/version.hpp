#pragma once

namespace mag {

inline constexpr const char* kToolVersion = "0.1.0";

} // namespace mag
