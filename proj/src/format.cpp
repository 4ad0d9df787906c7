#include "mgems/format.hpp"

#include <array>
#include <charconv>
#include <cmath>

namespace mgems {

std::string format_number(double value)
{
    if (std::isnan(value))
        return "nan";
    if (std::isinf(value))
        return value > 0 ? "inf" : "-inf";
    // Negative zero prints as "-0"; normalize so traces do not depend on sign of zero.
    if (value == 0.0)
        value = 0.0;
    std::array<char, 32> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return std::string(buf.data(), end);
}

} // namespace mgems
