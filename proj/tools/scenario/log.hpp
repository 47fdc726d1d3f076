#pragma once

#include <cstdlib>
#include <iostream>
#include <string>
#include <string_view>

namespace biham::cli {

enum class LogLevel { Error = 0, Warn = 1, Info = 2, Debug = 3 };

/// Verbosity from BIHAM_LOG (error|warn|info|debug), default warn.
inline LogLevel log_level() {
  static const LogLevel level = [] {
    const char* env = std::getenv("BIHAM_LOG");
    const std::string_view v = env ? env : "";
    if (v == "error") return LogLevel::Error;
    if (v == "info") return LogLevel::Info;
    if (v == "debug") return LogLevel::Debug;
    return LogLevel::Warn;
  }();
  return level;
}

inline void log(LogLevel level, const std::string& message) {
  static constexpr std::string_view names[] = {"error", "warn", "info", "debug"};
  if (static_cast<int>(level) > static_cast<int>(log_level())) return;
  std::cerr << "[biham " << names[static_cast<int>(level)] << "] " << message << '\n';
}

}  // namespace biham::cli
