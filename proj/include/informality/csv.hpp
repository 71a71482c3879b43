#pragma once

#include <cstddef>
#include <istream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace informality {

/// Unrecoverable stream failure (read error, not a malformed record).
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CsvRecord {
  std::vector<std::string> fields;
  /// 1-based physical line on which the record starts.
  std::size_t line = 0;
  /// Quoted field still open at end of input.
  bool unterminated = false;
};

/// RFC 4180 reader: quoted fields, doubled quotes, CRLF or LF line ends,
/// newlines inside quotes.
class CsvReader {
 public:
  explicit CsvReader(std::istream& in, char delimiter = ',');

  /// False at end of input. Throws IoError if the stream goes bad.
  bool next(CsvRecord& record);

 private:
  std::istream& in_;
  char delimiter_;
  std::size_t line_ = 0;
};

/// Splits one already-isolated line; convenience for tests and small files.
std::vector<std::string> split_csv_line(std::string_view line, char delimiter = ',');

std::string csv_escape(std::string_view field, char delimiter = ',');
std::string csv_join(const std::vector<std::string>& fields, char delimiter = ',');

}  // namespace informality
