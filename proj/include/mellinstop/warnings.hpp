#pragma once

#include <functional>
#include <string>

namespace mellinstop {

using WarnFn = std::function<void(const std::string&)>;

/// Replace the warning sink (default writes "warning: ..." to stderr).
void set_warning_handler(WarnFn fn);
void warn(const std::string& message);

}  // namespace mellinstop
