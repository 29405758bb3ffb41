#include "probefp/log.hpp"

#include <iostream>
#include <mutex>

namespace probefp {

namespace {

std::mutex g_handler_mutex;
WarningHandler g_handler;

}  // namespace

void set_warning_handler(WarningHandler handler) {
    std::lock_guard lock(g_handler_mutex);
    g_handler = std::move(handler);
}

void warn(const std::string& message) {
    WarningHandler handler;
    {
        std::lock_guard lock(g_handler_mutex);
        handler = g_handler;
    }
    if (handler) {
        handler(message);
    } else {
        std::cerr << "warning: " << message << "\n";
    }
}

}  // namespace probefp
