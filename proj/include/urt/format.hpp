#pragma once

#include <string>

namespace urt {

// Shortest decimal text that round-trips to the same double; locale-free.
std::string format_number(double value);

}  // namespace urt
