#pragma once

namespace ronmf {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace ronmf
