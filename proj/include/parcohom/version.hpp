#pragma once

namespace parcohom {

inline constexpr const char* version = "0.1.0";

}  // namespace parcohom
