#pragma once

namespace isildpc {

inline constexpr const char* kVersion = "0.1.0";

}
