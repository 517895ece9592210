#pragma once

namespace medfilter {
inline constexpr const char* kVersion = "1.0.0";
}
