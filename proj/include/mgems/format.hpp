#pragma once

#include <string>

namespace mgems {

/// Shortest decimal text that parses back to the same double ("nan"/"inf" for non-finite).
std::string format_number(double value);

} // namespace mgems
