#include <algorithm>
#include <charconv>
#include <cmath>

#include "informality/csv.hpp"
#include "informality/detail/text.hpp"
#include "informality/ingest.hpp"

namespace informality {
namespace {

struct Binding {
  const FieldSpec* field = nullptr;
  const RecodeMap* recode = nullptr;
  std::size_t csv_index = 0;
};

enum Role : std::size_t {
  kWeight,
  kMpce,
  kOccupation,
  kIndustry,
  kSector,
  kGender,
  kSocialGroup,
  kAge,
  kEnterpriseType,
  kEnterpriseSize,
  kJobStatus,
  kSocialSecurity,
  kRecordId,
  kRegion,
  kRoleCount
};

constexpr std::array<std::string_view, kRoleCount> kRoleNames = {
    "weight",     "mpce",       "occupation",      "industry",        "sector",     "gender",
    "social_group", "age",      "enterprise_type", "enterprise_size", "job_status", "social_security",
    "record_id",  "region"};

struct Failure {
  std::string field;
  std::string cause;
  std::string detail;
};

bool all_digits(std::string_view s) {
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

// Numeric field text to value; nullopt means malformed.
std::optional<double> to_number(std::string_view text, const FieldSpec& f) {
  const double scale = f.scale ? static_cast<double>(*f.scale) : 1.0;
  if (f.kind == FieldKind::Integer || all_digits(text)) {
    const auto k = detail::parse_int(text);
    if (!k) return std::nullopt;
    return static_cast<double>(*k) / scale;
  }
  const auto v = detail::parse_double(text);
  if (!v) return std::nullopt;
  return *v / scale;
}

std::string format_number(double v, const FieldSpec& f) {
  if (f.scale || f.kind == FieldKind::Integer) {
    const double scale = f.scale ? static_cast<double>(*f.scale) : 1.0;
    const double scaled = v * scale;
    const long long k = std::llround(scaled);
    if (std::fabs(scaled - static_cast<double>(k)) > 1e-6 * std::max(1.0, std::fabs(scaled)))
      throw LayoutError("value " + std::to_string(v) + " is not representable in field '" + f.name + "'");
    return std::to_string(k);
  }
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

template <std::size_t N>
bool in_set(std::string_view label, const std::array<std::string_view, N>& set) {
  return std::find(set.begin(), set.end(), label) != set.end();
}

std::vector<Binding> bind(const LayoutSpec& layout, const RecodeSet& recodes) {
  std::vector<Binding> b(kRoleCount);
  for (const auto& f : layout.fields) {
    if (f.recode && !recodes.contains(*f.recode))
      throw LayoutError("field '" + f.name + "' references unknown recode map '" + *f.recode + "'", f.line);
  }
  for (std::size_t r = 0; r < kRoleCount; ++r) {
    if (const FieldSpec* f = layout.field(kRoleNames[r])) {
      b[r].field = f;
      if (f->recode) b[r].recode = &recodes.find(*f->recode)->second;
    }
  }
  return b;
}

// Label-valued conversion shared by all code roles.
std::optional<std::string> decode(const Binding& b, std::string_view raw, Failure& fail) {
  if (!b.recode) return std::string(raw);
  auto label = b.recode->apply(raw);
  if (!label)
    fail = {b.field->name, "recode", "code '" + std::string(raw) + "' not in map '" + b.recode->name() + "'"};
  return label;
}

std::string encode(const Binding& b, std::string_view label) {
  if (!b.recode) return std::string(label);
  auto code = b.recode->source_for(label);
  if (!code)
    throw LayoutError("label '" + std::string(label) + "' has no source code in map '" + b.recode->name() + "'");
  return *code;
}

// Role values of one record as field texts, by role.
std::array<std::optional<std::string>, kRoleCount> role_texts(const ObservationRecord& r,
                                                              const std::vector<Binding>& b) {
  std::array<std::optional<std::string>, kRoleCount> out;
  auto set = [&](Role role, auto&& make) {
    if (b[role].field) out[role] = make(b[role]);
  };
  set(kWeight, [&](const Binding& x) { return format_number(r.weight, *x.field); });
  set(kMpce, [&](const Binding& x) { return format_number(r.mpce, *x.field); });
  set(kRecordId, [&](const Binding& x) { return encode(x, r.record_id); });
  set(kOccupation, [&](const Binding& x) { return encode(x, r.occupation); });
  set(kIndustry, [&](const Binding& x) { return encode(x, r.industry); });
  set(kSector, [&](const Binding& x) { return encode(x, r.sector); });
  set(kGender, [&](const Binding& x) { return encode(x, r.gender); });
  set(kSocialGroup, [&](const Binding& x) { return encode(x, r.social_group); });
  set(kRegion, [&](const Binding& x) { return encode(x, r.region); });
  set(kAge, [&](const Binding&) { return r.age ? std::to_string(*r.age) : std::string(); });
  set(kEnterpriseType, [&](const Binding& x) { return encode(x, to_string(r.enterprise.ownership)); });
  set(kEnterpriseSize, [&](const Binding& x) { return encode(x, to_string(r.enterprise.size_class)); });
  set(kJobStatus, [&](const Binding& x) { return encode(x, to_string(r.job.status)); });
  set(kSocialSecurity, [&](const Binding& x) { return encode(x, to_string(r.job.social_security)); });
  return out;
}

}  // namespace

struct RecordReader::Impl {
  Impl(std::istream& in, const LayoutSpec& layout, const RecodeSet& recodes)
      : in(in), layout(layout), bindings(bind(layout, recodes)) {
    if (layout.format == InputFormat::Csv) {
      csv.emplace(in, layout.delimiter);
      CsvRecord header;
      if (!csv->next(header)) {
        at_end = true;
        return;
      }
      header_width = header.fields.size();
      for (auto& b : bindings) {
        if (!b.field) continue;
        auto it = std::find_if(header.fields.begin(), header.fields.end(), [&](const std::string& h) {
          return detail::trim(h) == *b.field->column;
        });
        if (it == header.fields.end())
          throw LayoutError("CSV header has no column '" + *b.field->column + "'", b.field->line);
        b.csv_index = static_cast<std::size_t>(it - header.fields.begin());
      }
    }
  }

  std::optional<ReadResult> next() {
    if (at_end) return std::nullopt;
    std::array<std::optional<std::string>, kRoleCount> texts;
    std::size_t line_no = 0;
    if (csv) {
      CsvRecord rec;
      do {
        if (!csv->next(rec)) return std::nullopt;
      } while (rec.fields.size() == 1 && rec.fields[0].empty() && !rec.unterminated);
      line_no = rec.line;
      if (rec.unterminated) return RecordError{line_no, "", "unterminated-quote", "quoted field not closed", {}};
      if (rec.fields.size() != header_width)
        return RecordError{line_no, "", "column-count",
                           "expected " + std::to_string(header_width) + " columns, found " +
                               std::to_string(rec.fields.size()),
                           {}};
      for (std::size_t r = 0; r < kRoleCount; ++r)
        if (bindings[r].field) texts[r] = std::string(detail::trim(rec.fields[bindings[r].csv_index]));
    } else {
      std::string line;
      do {
        if (!std::getline(in, line)) {
          if (in.bad()) throw IoError("read failure on fixed-width input");
          return std::nullopt;
        }
        line_no = ++physical_line;
        if (!line.empty() && line.back() == '\r') line.pop_back();
      } while (line.empty());
      if (line.size() > *layout.record_length)
        return RecordError{line_no, "", "record-length",
                           "line has " + std::to_string(line.size()) + " bytes, record_length is " +
                               std::to_string(*layout.record_length),
                           {}};
      for (std::size_t r = 0; r < kRoleCount; ++r) {
        const FieldSpec* f = bindings[r].field;
        if (!f) continue;
        const std::size_t begin = *f->start - 1;
        texts[r] = begin < line.size() ? std::string(detail::trim(std::string_view(line).substr(begin, *f->width)))
                                       : std::string();
      }
    }
    return convert(texts, line_no);
  }

  ReadResult convert(const std::array<std::optional<std::string>, kRoleCount>& t, std::size_t line_no) const {
    ObservationRecord r;
    std::optional<double> weight;
    auto error = [&](Failure f) { return RecordError{line_no, f.field, f.cause, f.detail, weight}; };

    if (t[kWeight]) {
      if (t[kWeight]->empty()) return error({"weight", "missing-value", "blank weight"});
      const auto v = to_number(*t[kWeight], *bindings[kWeight].field);
      if (!v) return error({"weight", "malformed-number", "'" + *t[kWeight] + "'"});
      if (!std::isfinite(*v) || *v < 0.0) return error({"weight", "negative-weight", "'" + *t[kWeight] + "'"});
      r.weight = *v;
    } else {
      r.weight = 1.0;
    }
    weight = r.weight;

    Failure fail;
    auto label = [&](Role role, std::string& out) {
      if (!t[role]) return true;
      auto l = decode(bindings[role], *t[role], fail);
      if (!l) return false;
      out = std::move(*l);
      return true;
    };

    if (t[kRecordId]) {
      if (!label(kRecordId, r.record_id)) return error(fail);
    } else {
      r.record_id = std::to_string(line_no);
    }

    if (!t[kMpce] || t[kMpce]->empty()) return error({"mpce", "nonpositive-mpce", "mpce missing"});
    {
      const auto v = to_number(*t[kMpce], *bindings[kMpce].field);
      if (!v) return error({"mpce", "malformed-number", "'" + *t[kMpce] + "'"});
      if (!std::isfinite(*v) || *v <= 0.0) return error({"mpce", "nonpositive-mpce", "'" + *t[kMpce] + "'"});
      r.mpce = *v;
    }

    if (!label(kOccupation, r.occupation) || !label(kIndustry, r.industry) || !label(kRegion, r.region))
      return error(fail);

    auto closed = [&](Role role, std::string& out, const auto& set) {
      if (!t[role]) return true;
      if (!label(role, out)) return false;
      if (!in_set(out, set)) {
        fail = {std::string(kRoleNames[role]), "invalid-label", "'" + out + "'"};
        return false;
      }
      return true;
    };
    if (!closed(kSector, r.sector, kSectorLabels) || !closed(kGender, r.gender, kGenderLabels) ||
        !closed(kSocialGroup, r.social_group, kSocialGroupLabels))
      return error(fail);

    if (t[kAge] && !t[kAge]->empty()) {
      const auto a = detail::parse_int(*t[kAge]);
      if (!a || *a < 0 || *a > 200) return error({"age", "malformed-number", "'" + *t[kAge] + "'"});
      r.age = static_cast<int>(*a);
      r.age_group = age_group_for(*r.age);
    }

    auto enumerated = [&](Role role, auto& out, auto parse) {
      if (!t[role]) return true;
      std::string l;
      if (!label(role, l)) return false;
      if (l.empty()) return true;  // blank means Unknown
      auto v = parse(l);
      if (!v) {
        fail = {std::string(kRoleNames[role]), "invalid-label", "'" + l + "'"};
        return false;
      }
      out = *v;
      return true;
    };
    if (!enumerated(kEnterpriseType, r.enterprise.ownership, parse_ownership) ||
        !enumerated(kEnterpriseSize, r.enterprise.size_class, parse_size_class) ||
        !enumerated(kJobStatus, r.job.status, parse_job_status) ||
        !enumerated(kSocialSecurity, r.job.social_security, parse_social_security))
      return error(fail);

    return r;
  }

  std::istream& in;
  const LayoutSpec& layout;
  std::vector<Binding> bindings;
  std::optional<CsvReader> csv;
  std::size_t header_width = 0;
  std::size_t physical_line = 0;
  bool at_end = false;
};

RecordReader::RecordReader(std::istream& in, const LayoutSpec& layout, const RecodeSet& recodes)
    : impl_(std::make_unique<Impl>(in, layout, recodes)) {}
RecordReader::~RecordReader() = default;
RecordReader::RecordReader(RecordReader&&) noexcept = default;

std::optional<ReadResult> RecordReader::next() { return impl_->next(); }

std::vector<ReadResult> read_records(std::istream& in, const LayoutSpec& layout, const RecodeSet& recodes) {
  RecordReader reader(in, layout, recodes);
  std::vector<ReadResult> out;
  while (auto r = reader.next()) out.push_back(std::move(*r));
  return out;
}

IngestReport ingest_summary(std::span<const ReadResult> results) {
  IngestReport rep;
  for (const auto& item : results) {
    ++rep.lines;
    if (const auto* rec = std::get_if<ObservationRecord>(&item)) {
      ++rep.accepted;
      rep.accepted_weight += rec->weight;
    } else {
      const auto& err = std::get<RecordError>(item);
      ++rep.rejected;
      ++rep.rejected_by_cause[err.cause];
      if (err.weight) rep.rejected_weight += *err.weight;
    }
  }
  const double total = rep.accepted_weight + rep.rejected_weight;
  rep.rejected_weight_share = total > 0.0 ? rep.rejected_weight / total : 0.0;
  return rep;
}

std::vector<ObservationRecord> accepted_records(std::span<const ReadResult> results) {
  std::vector<ObservationRecord> out;
  for (const auto& item : results)
    if (const auto* rec = std::get_if<ObservationRecord>(&item)) out.push_back(*rec);
  return out;
}

std::string format_fixed_width(const ObservationRecord& record, const LayoutSpec& layout, const RecodeSet& recodes) {
  if (layout.format != InputFormat::FixedWidth) throw LayoutError("layout is not fixed-width");
  const auto bindings = bind(layout, recodes);
  const auto texts = role_texts(record, bindings);
  std::string line(*layout.record_length, ' ');
  for (std::size_t r = 0; r < kRoleCount; ++r) {
    if (!texts[r]) continue;
    const FieldSpec& f = *bindings[r].field;
    const std::string& text = *texts[r];
    if (text.size() > *f.width)
      throw LayoutError("value '" + text + "' does not fit field '" + f.name + "'");
    const bool right = f.kind != FieldKind::Code;
    const std::size_t offset = *f.start - 1 + (right ? *f.width - text.size() : 0);
    line.replace(offset, text.size(), text);
  }
  return line;
}

std::vector<std::string> csv_header(const LayoutSpec& layout) {
  std::vector<std::string> out;
  for (const auto& f : layout.fields) out.push_back(f.column.value_or(f.name));
  return out;
}

std::vector<std::string> format_csv_fields(const ObservationRecord& record, const LayoutSpec& layout,
                                           const RecodeSet& recodes) {
  if (layout.format != InputFormat::Csv) throw LayoutError("layout is not CSV");
  const auto bindings = bind(layout, recodes);
  const auto texts = role_texts(record, bindings);
  std::vector<std::string> out;
  for (const auto& f : layout.fields) {
    std::string cell;
    for (std::size_t r = 0; r < kRoleCount; ++r)
      if (bindings[r].field == &f && texts[r]) cell = *texts[r];
    out.push_back(std::move(cell));
  }
  return out;
}

}  // namespace informality
