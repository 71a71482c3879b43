#include "informality/csv.hpp"

#include <sstream>

namespace informality {

CsvReader::CsvReader(std::istream& in, char delimiter) : in_(in), delimiter_(delimiter) {}

bool CsvReader::next(CsvRecord& record) {
  record.fields.clear();
  record.unterminated = false;
  std::string line;
  if (!std::getline(in_, line)) {
    if (in_.bad()) throw IoError("read failure on CSV input");
    return false;
  }
  ++line_;
  record.line = line_;

  std::string field;
  bool quoted = false;
  bool field_was_quoted = false;
  for (;;) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    for (std::size_t i = 0; i < line.size(); ++i) {
      const char ch = line[i];
      if (quoted) {
        if (ch == '"') {
          if (i + 1 < line.size() && line[i + 1] == '"') {
            field.push_back('"');
            ++i;
          } else {
            quoted = false;
          }
        } else {
          field.push_back(ch);
        }
      } else if (ch == '"' && field.empty() && !field_was_quoted) {
        quoted = true;
        field_was_quoted = true;
      } else if (ch == delimiter_) {
        record.fields.push_back(std::move(field));
        field.clear();
        field_was_quoted = false;
      } else {
        field.push_back(ch);
      }
    }
    if (!quoted) break;
    // Quoted newline: continue with the next physical line.
    if (!std::getline(in_, line)) {
      if (in_.bad()) throw IoError("read failure on CSV input");
      record.unterminated = true;
      break;
    }
    ++line_;
    field.push_back('\n');
  }
  record.fields.push_back(std::move(field));
  return true;
}

std::vector<std::string> split_csv_line(std::string_view line, char delimiter) {
  std::istringstream in{std::string(line)};
  CsvReader reader(in, delimiter);
  CsvRecord record;
  if (!reader.next(record)) return {std::string()};
  return record.fields;
}

std::string csv_escape(std::string_view field, char delimiter) {
  if (field.find_first_of(std::string{'"', '\n', '\r', delimiter}) == std::string_view::npos)
    return std::string(field);
  std::string out = "\"";
  for (char ch : field) {
    if (ch == '"') out.push_back('"');
    out.push_back(ch);
  }
  out.push_back('"');
  return out;
}

std::string csv_join(const std::vector<std::string>& fields, char delimiter) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out.push_back(delimiter);
    out += csv_escape(fields[i], delimiter);
  }
  return out;
}

}  // namespace informality
