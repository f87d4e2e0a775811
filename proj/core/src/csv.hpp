#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pgeo::detail {

struct CsvRow {
  std::size_t line = 0;  // 1-based line where the record starts
  std::vector<std::string> fields;
};

// Reads comma-separated records. Double-quoted fields may contain commas,
// doubled quotes and newlines. Blank lines are skipped; a UTF-8 BOM on the
// first line is dropped. Returns nullopt at end of input.
class CsvReader {
 public:
  explicit CsvReader(std::istream& in) : in_(in) {}
  std::optional<CsvRow> next();

 private:
  std::istream& in_;
  std::size_t line_ = 0;
};

std::string csv_escape(std::string_view field);

// Strict decimal parse of a whole field (surrounding blanks allowed).
std::optional<double> parse_number(std::string_view text);

}  // namespace pgeo::detail
