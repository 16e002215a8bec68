#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace bnls {

// Format with 17 significant digits (round-trips double exactly).
std::string fmt_g17(double v);

std::string_view trim(std::string_view s);
std::vector<std::string_view> split_fields(std::string_view line);
bool parse_double(std::string_view s, double& out);
bool parse_long(std::string_view s, long& out);
bool parse_bool(std::string_view s, bool& out);

}  // namespace bnls
