#pragma once

namespace masar {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace masar
