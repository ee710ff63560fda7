#include "foodpref/csv.hpp"

#include "foodpref/error.hpp"

namespace foodpref::csv {

Reader::Reader(std::istream& in, char delimiter) : in_(in), delim_(delimiter) {}

std::optional<Row> Reader::next() {
  if (first_) {
    first_ = false;
    // UTF-8 byte order mark
    if (in_.peek() == 0xEF) {
      char bom[3];
      in_.read(bom, 3);
      if (!(static_cast<unsigned char>(bom[1]) == 0xBB &&
            static_cast<unsigned char>(bom[2]) == 0xBF)) {
        in_.clear();
        in_.seekg(0);
      }
    }
  }
  if (in_.peek() == std::char_traits<char>::eof()) return std::nullopt;

  record_line_ = line_;
  Row row;
  std::string field;
  bool quoted = false;
  bool field_was_quoted = false;
  bool after_quote = false;

  for (;;) {
    int ch = in_.get();
    if (ch == std::char_traits<char>::eof()) {
      if (quoted) {
        throw Error(Errc::kMalformedCsv,
                    "unterminated quoted field starting on line " + std::to_string(record_line_));
      }
      row.push_back(std::move(field));
      return row;
    }
    char c = static_cast<char>(ch);
    if (quoted) {
      if (c == '"') {
        if (in_.peek() == '"') {
          in_.get();
          field.push_back('"');
        } else {
          quoted = false;
          after_quote = true;
        }
      } else {
        if (c == '\n') ++line_;
        field.push_back(c);
      }
      continue;
    }
    if (c == delim_) {
      row.push_back(std::move(field));
      field.clear();
      field_was_quoted = after_quote = false;
    } else if (c == '\r' || c == '\n') {
      if (c == '\r' && in_.peek() == '\n') in_.get();
      ++line_;
      row.push_back(std::move(field));
      return row;
    } else if (c == '"' && field.empty() && !field_was_quoted) {
      quoted = field_was_quoted = true;
    } else if (after_quote) {
      throw Error(Errc::kMalformedCsv,
                  "unexpected character after closing quote on line " + std::to_string(line_));
    } else if (c == '"') {
      throw Error(Errc::kMalformedCsv,
                  "stray quote inside unquoted field on line " + std::to_string(line_));
    } else {
      field.push_back(c);
    }
  }
}

char sniff_delimiter(const std::string& header_line) {
  return header_line.find('\t') != std::string::npos ? '\t' : ',';
}

std::string escape(const std::string& field, char delimiter) {
  bool needs = field.find_first_of(std::string{delimiter, '"', '\n', '\r'}) != std::string::npos;
  if (!needs) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace foodpref::csv
