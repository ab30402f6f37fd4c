#include "efs/log.hpp"

#include <atomic>
#include <iostream>
#include <mutex>

namespace efs::log {
namespace {

std::mutex& sink_mutex() {
  static std::mutex m;
  return m;
}

void stderr_sink(Level level, std::string_view message) {
  std::cerr << '[' << level_name(level) << "] " << message << '\n';
}

Sink& current_sink() {
  static Sink sink = stderr_sink;
  return sink;
}

std::atomic<Level> g_level{Level::kInfo};

}  // namespace

Sink set_sink(Sink sink) {
  std::lock_guard lock(sink_mutex());
  Sink previous = std::move(current_sink());
  current_sink() = sink ? std::move(sink) : Sink(stderr_sink);
  return previous;
}

void set_level(Level level) { g_level.store(level); }
Level level() { return g_level.load(); }

void write(Level level, std::string_view message) {
  if (level < g_level.load()) return;
  std::lock_guard lock(sink_mutex());
  current_sink()(level, message);
}

const char* level_name(Level level) {
  switch (level) {
    case Level::kDebug:
      return "debug";
    case Level::kInfo:
      return "info";
    case Level::kWarn:
      return "warn";
    case Level::kError:
      return "error";
    case Level::kOff:
      return "off";
  }
  return "?";
}

}  // namespace efs::log
