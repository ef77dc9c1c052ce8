#pragma once

namespace plankforge {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace plankforge
