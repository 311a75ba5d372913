#pragma once

#include <functional>
#include <string_view>

namespace nvk {

using WarningHandler = std::function<void(std::string_view)>;

/// Installs the sink for numerical warnings (default: one line on stderr).
/// Returns the previous handler. Intended to be called once at start-up.
WarningHandler set_warning_handler(WarningHandler handler);

void warn(std::string_view message);

}  // namespace nvk
