#pragma once

namespace epicount {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace epicount
