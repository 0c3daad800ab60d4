#include "nsac/log.hpp"

#include <atomic>
#include <iostream>
#include <mutex>

namespace nsac {
namespace {

std::atomic<LogLevel> g_level{LogLevel::warning};
std::atomic<std::size_t> g_warnings{0};
std::mutex g_sink;

}  // namespace

void set_log_level(LogLevel level) { g_level = level; }
LogLevel log_level() { return g_level; }

void log_warning(const std::string& message) {
    ++g_warnings;
    if (g_level == LogLevel::quiet) return;
    std::lock_guard lock(g_sink);
    std::cerr << "[nsac] warning: " << message << '\n';
}

void log_info(const std::string& message) {
    if (g_level != LogLevel::info) return;
    std::lock_guard lock(g_sink);
    std::cerr << "[nsac] " << message << '\n';
}

std::size_t warning_count() { return g_warnings; }

}  // namespace nsac
