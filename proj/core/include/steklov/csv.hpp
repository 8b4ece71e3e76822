#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace steklov {

// Shortest round-trip text for a double (%.17g; "nan", "inf", "-inf" for non-finite values).
std::string format_double(double v);

// RFC-4180 quoting: fields containing a comma, quote, CR or LF are quoted and quotes doubled.
std::string csv_escape(std::string_view field);
// Fields joined by commas and terminated by CRLF-free "\n".
std::string csv_row(const std::vector<std::string>& fields);

struct CsvTable {
  // Lines starting with '#' before the header row, without the marker.
  std::vector<std::string> comments;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  // Throws kParse when the column is missing.
  int column(std::string_view name) const;
  // Throws kParse naming the data row (1-based, header excluded) when the cell is not a number.
  double number(std::size_t row, int col) const;
};

// Accepts quoted fields with embedded separators and line breaks, and LF or CRLF endings.
// Throws kParse naming the row when the input is empty, a quote is unterminated or a row has
// the wrong number of fields.
CsvTable parse_csv(std::string_view text);

std::string read_text_file(const std::string& path);
// Creates missing parent directories, then writes through a temporary file and renames, so a
// failed write leaves no partial output.
void write_text_file(const std::string& path, std::string_view text);

}  // namespace steklov
