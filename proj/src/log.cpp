#include "deq/log.hpp"

#include <iostream>
#include <mutex>

namespace deq {

namespace {

void stderr_sink(const std::string& message) { std::cerr << "warning: " << message << '\n'; }

std::mutex g_sink_mutex;
WarningSink g_sink = stderr_sink;

} // namespace

WarningSink set_warning_sink(WarningSink sink)
{
    std::lock_guard lock(g_sink_mutex);
    auto previous = std::move(g_sink);
    g_sink = sink ? std::move(sink) : WarningSink(stderr_sink);
    return previous;
}

void warn(const std::string& message)
{
    std::lock_guard lock(g_sink_mutex);
    g_sink(message);
}

} // namespace deq
