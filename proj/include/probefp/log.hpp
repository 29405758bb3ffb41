#pragma once

#include <functional>
#include <string>

namespace probefp {

using WarningHandler = std::function<void(const std::string&)>;

// Non-fatal diagnostics (truncated IEs, duplicate elements, weak rounds).
// Default handler writes to stderr; tests install a capturing sink.
void set_warning_handler(WarningHandler handler);
void warn(const std::string& message);

}  // namespace probefp
