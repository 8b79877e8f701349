#pragma once

#include <functional>
#include <string>

namespace deq {

using WarningSink = std::function<void(const std::string&)>;

/// Replace the process-wide warning sink; returns the previous one.
/// The default sink prints to stderr. Passing an empty function restores it.
WarningSink set_warning_sink(WarningSink sink);

void warn(const std::string& message);

} // namespace deq
