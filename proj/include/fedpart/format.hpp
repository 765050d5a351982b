#pragma once

// Locale-independent text output shared by every writer.

#include <optional>
#include <span>
#include <string>

#include "fedpart/model.hpp"

namespace fedpart {

// Shortest representation that round-trips (at most 17 significant digits).
std::string format_number(double value);
std::string format_number(std::optional<double> value);  // empty when absent

std::string join_ids(std::span<const ClientId> ids, char separator = ';');

}  // namespace fedpart
