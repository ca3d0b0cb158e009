#pragma once

namespace uniwalk {

inline constexpr const char* kVersion = "0.1.0";

} // namespace uniwalk
