#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace fxlabel::csv {

using Row = std::vector<std::string>;

// RFC-4180 parser. Accepts \n and \r\n row endings, quoted fields with
// embedded commas, quotes ("") and newlines. Throws ParseError with a
// 1-based line number on unbalanced quotes.
std::vector<Row> parse(std::string_view text);

// Line number (1-based, counting physical lines) where each parsed row
// starts. Same length as parse(text).
struct Parsed {
  std::vector<Row> rows;
  std::vector<long> line_numbers;
};
Parsed parse_with_lines(std::string_view text);

std::string escape_field(std::string_view field);
std::string format_row(const Row& row);
std::string format(const std::vector<Row>& rows);

}  // namespace fxlabel::csv
