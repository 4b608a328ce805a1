#pragma once

#include <cstdio>
#include <string>
#include <string_view>
#include <vector>

namespace sentvol {

// Shortest decimal form that round-trips a double (printf %.17g then trims).
std::string format_double(double v);

// Fixed significant digits, for human-facing tables.
std::string format_double(double v, int significant);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view content);

std::vector<std::string> split(std::string_view s, char sep);
std::string trim(std::string_view s);

}  // namespace sentvol
