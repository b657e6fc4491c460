#pragma once

namespace photonstats {

inline constexpr const char* kArtifactVersion = "1.0.0";

} // namespace photonstats
