#pragma once

namespace ncstream {

inline constexpr const char* kVersion = "ncsim 0.1.0";

}  // namespace ncstream
