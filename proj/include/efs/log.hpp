#pragma once

#include <functional>
#include <string>
#include <string_view>

namespace efs::log {

enum class Level { kDebug = 0, kInfo = 1, kWarn = 2, kError = 3, kOff = 4 };

using Sink = std::function<void(Level, std::string_view)>;

/// Replaces the process-wide sink; the default writes "[level] msg" to stderr.
/// Returns the previous sink so callers (tests) can restore it.
Sink set_sink(Sink sink);
void set_level(Level level);
Level level();

void write(Level level, std::string_view message);

inline void debug(std::string_view m) { write(Level::kDebug, m); }
inline void info(std::string_view m) { write(Level::kInfo, m); }
inline void warn(std::string_view m) { write(Level::kWarn, m); }
inline void error(std::string_view m) { write(Level::kError, m); }

const char* level_name(Level level);

}  // namespace efs::log
