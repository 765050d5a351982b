#include "fedpart/format.hpp"

#include <array>
#include <charconv>

namespace fedpart {

std::string format_number(double value) {
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc()) return "nan";
  return std::string(buf.data(), end);
}

std::string format_number(std::optional<double> value) {
  return value ? format_number(*value) : std::string();
}

std::string join_ids(std::span<const ClientId> ids, char separator) {
  std::string out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) out += separator;
    out += std::to_string(ids[i]);
  }
  return out;
}

}  // namespace fedpart
