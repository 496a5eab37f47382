#pragma once

namespace dgres {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace dgres
