#include "urt/format.hpp"

#include <charconv>

namespace urt {

std::string format_number(double value) {
  char buf[64];
  auto const [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return ec == std::errc{} ? std::string(buf, ptr) : std::string{"nan"};
}

}  // namespace urt
