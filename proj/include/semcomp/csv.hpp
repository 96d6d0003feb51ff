#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace semcomp {

/// Parsed CSV: header plus rows, each row tagged with its 1-based file line.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> lines;

  /// Column index by name, or -1.
  int column(std::string_view name) const;
};

/// RFC 4180-style reader: comma separated, double-quoted fields with "" escapes,
/// LF or CRLF line endings. Throws InputError on ragged rows or open quotes.
CsvTable read_csv(const std::filesystem::path& path);
CsvTable parse_csv(std::string_view text, const std::string& origin = "<csv>");

class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);

  void row(const std::vector<std::string>& fields);
  std::string str() const { return text_; }
  void save(const std::filesystem::path& path) const;

 private:
  std::size_t width_;
  std::string text_;
};

/// Shortest decimal form that round-trips the double; fixed across runs.
std::string format_double(double value);

}  // namespace semcomp
