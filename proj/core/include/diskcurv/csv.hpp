#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace diskcurv {

// Shortest decimal representation that parses back to the same double.
std::string format_double(double value);

// Minimal reader for the numeric CSV files this library writes: a header
// line followed by comma-separated rows. Throws ConfigError with the line
// number on malformed input.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

CsvTable read_csv(std::istream& in, std::string_view source_name);
double parse_double(std::string_view text, std::string_view context);
long long parse_integer(std::string_view text, std::string_view context);

}  // namespace diskcurv
