#pragma once

#include <cstddef>
#include <istream>
#include <optional>
#include <string>
#include <vector>

namespace foodpref::csv {

using Row = std::vector<std::string>;

// RFC-4180 record reader: quoted fields may contain delimiters, doubled
// quotes and line breaks. CRLF and LF line endings are both accepted.
class Reader {
 public:
  explicit Reader(std::istream& in, char delimiter = ',');

  // Returns std::nullopt at end of input. Throws Error(kMalformedCsv) on an
  // unterminated quoted field.
  std::optional<Row> next();

  // 1-based line number where the most recently returned record started.
  std::size_t line() const { return record_line_; }

 private:
  std::istream& in_;
  char delim_;
  std::size_t line_ = 1;
  std::size_t record_line_ = 0;
  bool first_ = true;
};

// Chooses tab when the header line contains one, else comma.
char sniff_delimiter(const std::string& header_line);

std::string escape(const std::string& field, char delimiter = ',');

}  // namespace foodpref::csv
