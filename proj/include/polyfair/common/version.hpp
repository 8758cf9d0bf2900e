#pragma once

namespace polyfair {
inline constexpr const char* kToolVersion = "0.3.0";
inline constexpr int kReportSchemaVersion = 1;
}  // namespace polyfair
