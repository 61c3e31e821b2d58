#pragma once

namespace freent {

inline constexpr const char* kVersion = "0.1.0";

}
