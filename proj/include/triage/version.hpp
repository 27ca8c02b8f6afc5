#pragma once

namespace triage {
inline constexpr const char* kVersion = "1.0.0";
}
