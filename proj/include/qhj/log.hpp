#pragma once

#include <functional>
#include <string_view>

namespace qhj {

using WarningSink = std::function<void(std::string_view)>;

/// Replaces the process-wide warning sink (default: stderr). Returns the old one.
WarningSink set_warning_sink(WarningSink sink);

void warn(std::string_view message);

}  // namespace qhj
