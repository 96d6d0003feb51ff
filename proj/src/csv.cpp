#include "semcomp/csv.hpp"

#include "semcomp/errors.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace semcomp {

int CsvTable::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return static_cast<int>(i);
  }
  return -1;
}

CsvTable parse_csv(std::string_view text, const std::string& origin) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::size_t> record_lines;
  std::vector<std::string> fields;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;
  std::size_t line = 1;
  std::size_t record_line = 1;

  auto end_record = [&] {
    fields.push_back(std::move(field));
    field.clear();
    // A bare newline (or a lone empty field) is a blank line, not a record.
    if (!(fields.size() == 1 && fields[0].empty() && !field_started)) {
      records.push_back(std::move(fields));
      record_lines.push_back(record_line);
    }
    fields.clear();
    field_started = false;
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
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
        field_started = true;
        break;
      case ',':
        fields.push_back(std::move(field));
        field.clear();
        field_started = true;
        break;
      case '\r':
        break;
      case '\n':
        end_record();
        ++line;
        record_line = line;
        break;
      default:
        field.push_back(c);
        field_started = true;
    }
  }
  if (in_quotes) throw InputError(origin + ":" + std::to_string(record_line) + ": unterminated quote");
  if (field_started || !field.empty() || !fields.empty()) end_record();

  CsvTable table;
  if (records.empty()) return table;
  table.header = std::move(records.front());
  for (auto& h : table.header) {
    // Tolerate a UTF-8 byte-order mark on the first header cell.
    if (h.rfind("\xEF\xBB\xBF", 0) == 0) h.erase(0, 3);
  }
  for (std::size_t r = 1; r < records.size(); ++r) {
    if (records[r].size() != table.header.size()) {
      throw InputError(origin + ":" + std::to_string(record_lines[r]) + ": expected " +
                       std::to_string(table.header.size()) + " fields, found " +
                       std::to_string(records[r].size()));
    }
    table.rows.push_back(std::move(records[r]));
    table.lines.push_back(record_lines[r]);
  }
  return table;
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_csv(ss.str(), path.string());
}

CsvWriter::CsvWriter(std::vector<std::string> header) : width_(header.size()) { row(header); }

void CsvWriter::row(const std::vector<std::string>& fields) {
  if (fields.size() != width_) throw InvariantError("CSV row width mismatch");
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) text_.push_back(',');
    const auto& f = fields[i];
    if (f.find_first_of(",\"\n\r") == std::string::npos) {
      text_ += f;
    } else {
      text_.push_back('"');
      for (char c : f) {
        if (c == '"') text_.push_back('"');
        text_.push_back(c);
      }
      text_.push_back('"');
    }
  }
  text_.push_back('\n');
}

void CsvWriter::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write " + path.string());
  out << text_;
  if (!out) throw InputError("write failed for " + path.string());
}

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (value == 0.0) return "0";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

}  // namespace semcomp
