#pragma once

#include <string_view>

namespace amc::log {

/// Emits a warning on stderr unless warnings are silenced.
void warn(std::string_view message);

/// Silences (or re-enables) warnings process-wide. Returns the previous state.
bool set_quiet(bool quiet) noexcept;

}  // namespace amc::log
