#pragma once

namespace morsedec {
inline constexpr const char* kVersion = "0.1.0";
}
