#include "steklov/csv.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "steklov/error.hpp"

namespace steklov {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string csv_row(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    out += csv_escape(fields[i]);
  }
  out += '\n';
  return out;
}

int CsvTable::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return static_cast<int>(i);
  }
  raise(ErrorCode::kParse, "missing column '" + std::string(name) + "'");
}

double CsvTable::number(std::size_t row, int col) const {
  const std::string& cell = rows.at(row).at(col);
  const char* begin = cell.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (cell.empty() || end != begin + cell.size()) {
    raise(ErrorCode::kParse, "row " + std::to_string(row + 1) + ", column '" + header.at(col) +
                                 "': not a number: '" + cell + "'");
  }
  return v;
}

CsvTable parse_csv(std::string_view text) {
  CsvTable table;
  std::size_t pos = 0;
  // Comment lines before the header.
  while (pos < text.size() && text[pos] == '#') {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos + 1, eol - pos - 1);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty() && line.front() == ' ') line.remove_prefix(1);
    table.comments.emplace_back(line);
    pos = eol + 1;
  }

  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool quoted = false;
  bool field_started = false;
  auto end_field = [&] {
    record.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_record = [&] {
    end_field();
    if (!(record.size() == 1 && record[0].empty())) records.push_back(std::move(record));
    record.clear();
  };
  for (; pos < text.size(); ++pos) {
    const char c = text[pos];
    if (quoted) {
      if (c == '"') {
        if (pos + 1 < text.size() && text[pos + 1] == '"') {
          field += '"';
          ++pos;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"' && !field_started) {
      quoted = true;
      field_started = true;
    } else if (c == ',') {
      end_field();
    } else if (c == '\n') {
      end_record();
    } else if (c == '\r') {
      if (pos + 1 < text.size() && text[pos + 1] == '\n') continue;
      end_record();
    } else {
      field += c;
      field_started = true;
    }
  }
  if (quoted) raise(ErrorCode::kParse, "row " + std::to_string(records.size()) + ": unterminated quoted field");
  if (field_started || !record.empty()) end_record();

  if (records.empty()) raise(ErrorCode::kParse, "empty CSV: no header row");
  table.header = std::move(records.front());
  for (std::size_t i = 1; i < records.size(); ++i) {
    if (records[i].size() != table.header.size()) {
      raise(ErrorCode::kParse, "row " + std::to_string(i) + ": expected " + std::to_string(table.header.size()) +
                                   " fields, got " + std::to_string(records[i].size()));
    }
    table.rows.push_back(std::move(records[i]));
  }
  return table;
}

std::string read_text_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) raise(ErrorCode::kIo, "cannot read " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, std::string_view text) {
  const std::string tmp = path + ".tmp";
  std::error_code ec;
  const std::filesystem::path parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent, ec);
  {
    std::ofstream f(tmp, std::ios::binary);
    if (!f) raise(ErrorCode::kIo, "cannot write " + path);
    f.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!f) raise(ErrorCode::kIo, "write failed: " + path);
  }
  std::filesystem::rename(tmp, path, ec);
  if (ec) raise(ErrorCode::kIo, "cannot move " + tmp + " to " + path + ": " + ec.message());
}

}  // namespace steklov
