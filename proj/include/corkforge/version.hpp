#pragma once

#define CORKFORGE_VERSION "0.1.0"

namespace corkforge {
inline constexpr const char* version = CORKFORGE_VERSION;
}
