#include "diskcurv/csv.hpp"

#include <array>
#include <charconv>
#include <istream>
#include <sstream>

#include "diskcurv/errors.hpp"

namespace diskcurv {

std::string format_double(double value) {
  std::array<char, 32> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc()) throw NumericError("format_double: conversion failed");
  return std::string(buf.data(), end);
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string> split(std::string_view line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    cells.emplace_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

}  // namespace

CsvTable read_csv(std::istream& in, std::string_view source_name) {
  CsvTable table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto cells = split(line);
    if (table.header.empty()) {
      table.header = std::move(cells);
      continue;
    }
    if (cells.size() != table.header.size()) {
      std::ostringstream msg;
      msg << source_name << ':' << line_no << ": expected " << table.header.size()
          << " columns, got " << cells.size();
      throw ConfigError(msg.str());
    }
    table.rows.push_back(std::move(cells));
  }
  if (table.header.empty()) throw ConfigError(std::string(source_name) + ": empty CSV");
  return table;
}

double parse_double(std::string_view text, std::string_view context) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ConfigError(std::string(context) + ": cannot parse number '" + std::string(text) + "'");
  }
  return value;
}

long long parse_integer(std::string_view text, std::string_view context) {
  long long value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ConfigError(std::string(context) + ": cannot parse integer '" + std::string(text) +
                      "'");
  }
  return value;
}

}  // namespace diskcurv
