#pragma once

#include <string>

namespace srw {

inline constexpr const char* kArtifactVersion = "1.0.0";

// Shortest exact decimal form: round-trips to the same double, so emitted
// tables are byte-stable across runs and thread counts.
std::string format_double(double v);

}  // namespace srw
