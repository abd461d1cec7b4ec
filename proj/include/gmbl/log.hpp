#pragma once

#include <cstdio>
#include <string>

namespace gmbl {

/// Non-fatal diagnostics go to stderr so stdout stays machine-readable.
inline void warn(const std::string& msg) {
  std::fprintf(stderr, "[gmbl] warning: %s\n", msg.c_str());
}

}  // namespace gmbl
