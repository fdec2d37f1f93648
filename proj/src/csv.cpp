#include "fxlabel/csv.hpp"

#include "fxlabel/errors.hpp"

namespace fxlabel::csv {

Parsed parse_with_lines(std::string_view text) {
  Parsed out;
  Row row;
  std::string field;
  bool in_quotes = false;
  bool row_started = false;
  long line = 1;
  long row_line = 1;

  auto end_field = [&] {
    row.push_back(std::move(field));
    field.clear();
  };
  auto end_row = [&] {
    end_field();
    out.rows.push_back(std::move(row));
    out.line_numbers.push_back(row_line);
    row.clear();
    row_started = false;
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (!row_started) {
      row_started = true;
      row_line = line;
    }
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        in_quotes = true;
        break;
      case ',':
        end_field();
        break;
      case '\r':
        if (i + 1 < text.size() && text[i + 1] == '\n') ++i;
        ++line;
        end_row();
        break;
      case '\n':
        ++line;
        end_row();
        break;
      default:
        field.push_back(c);
        break;
    }
  }
  if (in_quotes) {
    throw ParseError(row_line, "unterminated quoted field");
  }
  if (row_started || !field.empty() || !row.empty()) {
    end_row();
  }
  return out;
}

std::vector<Row> parse(std::string_view text) {
  return parse_with_lines(text).rows;
}

std::string escape_field(std::string_view field) {
  const bool needs_quotes =
      field.find_first_of(",\"\r\n") != std::string_view::npos;
  if (!needs_quotes) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out += '"';
  return out;
}

std::string format_row(const Row& row) {
  std::string out;
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) out.push_back(',');
    out += escape_field(row[i]);
  }
  out.push_back('\n');
  return out;
}

std::string format(const std::vector<Row>& rows) {
  std::string out;
  for (const Row& row : rows) out += format_row(row);
  return out;
}

}  // namespace fxlabel::csv
