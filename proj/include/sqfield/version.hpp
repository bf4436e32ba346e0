#pragma once

namespace sqfield {

inline constexpr const char* kVersion = "0.1.0";

} // namespace sqfield
