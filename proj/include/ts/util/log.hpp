#pragma once

#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace ts::util {

enum class LogLevel : int { kError = 0, kWarn = 1, kInfo = 2, kDebug = 3 };

// Level comes from TS_SANDBOX_LOG (error|warn|info|debug), default warn.
inline LogLevel log_level() {
  static LogLevel level = [] {
    const char* env = std::getenv("TS_SANDBOX_LOG");
    if (!env) return LogLevel::kWarn;
    if (std::strcmp(env, "error") == 0) return LogLevel::kError;
    if (std::strcmp(env, "warn") == 0) return LogLevel::kWarn;
    if (std::strcmp(env, "info") == 0) return LogLevel::kInfo;
    if (std::strcmp(env, "debug") == 0) return LogLevel::kDebug;
    return LogLevel::kWarn;
  }();
  return level;
}

inline void logf(LogLevel level, const char* fmt, ...) {
  if (static_cast<int>(level) > static_cast<int>(log_level())) return;
  static const char* names[] = {"ERROR", "WARN", "INFO", "DEBUG"};
  std::fprintf(stderr, "[%s] ", names[static_cast<int>(level)]);
  va_list args;
  va_start(args, fmt);
  std::vfprintf(stderr, fmt, args);
  va_end(args);
  std::fputc('\n', stderr);
}

#define TS_LOG_ERROR(...) ::ts::util::logf(::ts::util::LogLevel::kError, __VA_ARGS__)
#define TS_LOG_WARN(...) ::ts::util::logf(::ts::util::LogLevel::kWarn, __VA_ARGS__)
#define TS_LOG_INFO(...) ::ts::util::logf(::ts::util::LogLevel::kInfo, __VA_ARGS__)
#define TS_LOG_DEBUG(...) ::ts::util::logf(::ts::util::LogLevel::kDebug, __VA_ARGS__)

}  // namespace ts::util
