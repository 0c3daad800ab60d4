#pragma once

#include <cstddef>
#include <string>

namespace nsac {

enum class LogLevel { quiet, warning, info };

/// Process-wide verbosity; defaults to `warning`.  Thread-safe.
void set_log_level(LogLevel level);
LogLevel log_level();

void log_warning(const std::string& message);
void log_info(const std::string& message);

/// Number of warnings emitted since start-up (used by tests).
std::size_t warning_count();

}  // namespace nsac
