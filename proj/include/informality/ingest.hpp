#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "informality/record.hpp"

namespace informality {

// ---------------------------------------------------------------------------
// Layout descriptors
// ---------------------------------------------------------------------------

enum class InputFormat { FixedWidth, Csv };
enum class FieldKind { Decimal, Integer, Code };

struct FieldSpec {
  std::string name;
  /// Fixed-width source: 1-based first column and width in bytes.
  std::optional<std::size_t> start;
  std::optional<std::size_t> width;
  /// CSV source: header name.
  std::optional<std::string> column;
  FieldKind kind = FieldKind::Code;
  /// Implied-decimal divisor, a power of ten.
  std::optional<std::int64_t> scale;
  std::optional<std::string> recode;
  /// Descriptor line of the field block, for messages.
  std::size_t line = 0;
};

/// Roles every layout binds to a field or lists under `absent`.
inline constexpr std::array<std::string_view, 12> kRequiredRoles = {
    "weight", "mpce",      "occupation",      "industry",        "sector",     "gender",
    "social_group", "age", "enterprise_type", "enterprise_size", "job_status", "social_security"};
/// Roles that may be bound but are never required.
inline constexpr std::array<std::string_view, 2> kOptionalRoles = {"record_id", "region"};

struct LayoutSpec {
  InputFormat format = InputFormat::FixedWidth;
  std::optional<std::size_t> record_length;
  char delimiter = ',';
  std::vector<FieldSpec> fields;
  std::vector<std::string> absent;

  const FieldSpec* field(std::string_view name) const;
  bool is_absent(std::string_view role) const;
  /// Number of semantic roles (required or optional) bound to a field.
  std::size_t bound_role_count() const;
};

/// Descriptor syntax or validation failure. Positions are 1-based; zero when
/// the problem has no single location.
class LayoutError : public std::runtime_error {
 public:
  LayoutError(const std::string& message, std::size_t line = 0, std::size_t column = 0);
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Parses and validates a layout descriptor (grammar in docs/layout.md).
LayoutSpec parse_layout(std::string_view descriptor_text);
LayoutSpec load_layout(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Recode maps
// ---------------------------------------------------------------------------

enum class RecodeDefault { Reject, PassThrough, FixedLabel };

class RecodeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Source code to category label, with a policy for unlisted codes.
class RecodeMap {
 public:
  RecodeMap(std::string name, const std::vector<std::pair<std::string, std::string>>& entries,
            RecodeDefault fallback = RecodeDefault::Reject,
            std::optional<std::string> fallback_label = std::nullopt);

  const std::string& name() const noexcept { return name_; }
  RecodeDefault fallback() const noexcept { return fallback_; }
  const std::optional<std::string>& fallback_label() const noexcept { return fallback_label_; }
  const std::map<std::string, std::string, std::less<>>& entries() const noexcept { return entries_; }

  /// Label for `code`, or nullopt when the map rejects it.
  std::optional<std::string> apply(std::string_view code) const;
  /// Smallest source code mapping to `label`; pass-through maps fall back to
  /// the label itself.
  std::optional<std::string> source_for(std::string_view label) const;

  /// File form: optional "#!name=<id>" and "#!default=reject|pass-through|
  /// label:<text>" directive lines, then a source_code,target_label header
  /// and one row per entry. Other '#' lines are comments.
  static RecodeMap parse(std::istream& in, std::string default_name);
  /// The map name defaults to the file stem.
  static RecodeMap load(const std::filesystem::path& path);

 private:
  std::string name_;
  std::map<std::string, std::string, std::less<>> entries_;
  RecodeDefault fallback_;
  std::optional<std::string> fallback_label_;
};

using RecodeSet = std::map<std::string, RecodeMap, std::less<>>;

RecodeSet make_recode_set(std::vector<RecodeMap> maps);

// ---------------------------------------------------------------------------
// Record reading
// ---------------------------------------------------------------------------

struct RecordError {
  /// 1-based physical line in the input.
  std::size_t line = 0;
  std::string field;
  /// "record-length", "column-count", "unterminated-quote", "missing-value",
  /// "malformed-number", "recode", "invalid-label", "negative-weight",
  /// "nonpositive-mpce".
  std::string cause;
  std::string detail;
  /// Parsed weight when it was readable, for weighted rejection shares.
  std::optional<double> weight;

  bool operator==(const RecordError&) const = default;
};

using ReadResult = std::variant<ObservationRecord, RecordError>;

/// Streaming parser: one result per input record (per line for fixed width,
/// per data row for CSV), in input order; empty lines are skipped. Per-record
/// problems come back as RecordError; a failing stream throws IoError.
class RecordReader {
 public:
  /// Throws LayoutError when the layout references a recode map not in
  /// `recodes`, or when a CSV header lacks a bound column.
  RecordReader(std::istream& in, const LayoutSpec& layout, const RecodeSet& recodes);
  ~RecordReader();
  RecordReader(RecordReader&&) noexcept;
  RecordReader& operator=(RecordReader&&) = delete;

  std::optional<ReadResult> next();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

std::vector<ReadResult> read_records(std::istream& in, const LayoutSpec& layout, const RecodeSet& recodes);

struct IngestReport {
  std::size_t lines = 0;
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::map<std::string, std::size_t> rejected_by_cause;
  double accepted_weight = 0.0;
  double rejected_weight = 0.0;
  /// rejected_weight / (accepted_weight + rejected_weight); 0 when both are 0.
  double rejected_weight_share = 0.0;
};

IngestReport ingest_summary(std::span<const ReadResult> results);

/// Accepted records, in order.
std::vector<ObservationRecord> accepted_records(std::span<const ReadResult> results);

// ---------------------------------------------------------------------------
// Serialization under a layout (inverse of reading)
// ---------------------------------------------------------------------------

/// Throws LayoutError when a value does not fit its field or a label has no
/// source code.
std::string format_fixed_width(const ObservationRecord& record, const LayoutSpec& layout,
                               const RecodeSet& recodes);
std::vector<std::string> format_csv_fields(const ObservationRecord& record, const LayoutSpec& layout,
                                           const RecodeSet& recodes);
std::vector<std::string> csv_header(const LayoutSpec& layout);

}  // namespace informality
