#include "informality/output.hpp"

#include <charconv>
#include <fmt/format.h>

#include "informality/csv.hpp"
#include "informality/detail/text.hpp"

namespace informality {
namespace {

using nlohmann::json;

std::string f3(double v) { return fmt::format("{:.3f}", v); }
std::string f2(double v) { return fmt::format("{:.2f}", v); }

void row(std::ostream& out, const std::vector<std::string>& fields) { out << csv_join(fields) << '\n'; }

const std::vector<std::string> kDecompositionHeader = {"level", "row", "C_w", "GEI", "P", "R",
                                                       "W", "W/B", "Index", "C_t_pct"};

void decomposition_rows(std::ostream& out, const std::string& level, const DecompositionResult& r,
                        double index_value, double within_pct, double between_pct,
                        std::span<const double> row_pct) {
  row(out, {level, "I", "", "", "", "", "", "", f3(index_value), level == r.key ? f2(100.0) : ""});
  row(out, {level, "I_w", "", "", "", "", "", f3(r.within), "", f2(within_pct)});
  row(out, {level, "I_b", "", "", "", "", "", f3(r.between), "", f2(between_pct)});
  for (std::size_t j = 0; j < r.rows.size(); ++j) {
    const auto& g = r.rows[j];
    row(out, {level, g.label, f3(g.C_w), f3(g.index.value), f3(g.P), f3(g.R), f3(g.W), "", "", f2(row_pct[j])});
  }
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

json to_json(const GEIndex& index) {
  return json{{"alpha", index.alpha}, {"value", index.value}, {"clamped", index.clamped}};
}

json to_json(const IngestReport& r) {
  return json{{"lines", r.lines},
              {"accepted", r.accepted},
              {"rejected", r.rejected},
              {"rejected_by_cause", r.rejected_by_cause},
              {"accepted_weight", r.accepted_weight},
              {"rejected_weight", r.rejected_weight},
              {"rejected_weight_share", r.rejected_weight_share}};
}

json to_json(const RecordError& e) {
  json j{{"line", e.line}, {"field", e.field}, {"cause", e.cause}, {"detail", e.detail}};
  j["weight"] = e.weight ? json(*e.weight) : json(nullptr);
  return j;
}

json to_json(const ClassTally& t) {
  json counts, weights, shares;
  for (auto c : {EmploymentClass::Formal, EmploymentClass::Informal, EmploymentClass::Indeterminate}) {
    const std::string name(to_string(c));
    counts[name] = t.count(c);
    weights[name] = t.weight(c);
    shares[name] = t.share(c);
  }
  return json{{"counts", counts},
              {"weights", weights},
              {"weighted_shares", shares},
              {"total_count", t.total_count()},
              {"total_weight", t.total_weight()},
              {"reassigned_count", t.reassigned_count},
              {"reassigned_weight", t.reassigned_weight}};
}

json to_json(const ObservationRecord& r) {
  return json{{"record_id", r.record_id},
              {"weight", r.weight},
              {"mpce", r.mpce},
              {"occupation", r.occupation},
              {"industry", r.industry},
              {"sector", r.sector},
              {"gender", r.gender},
              {"social_group", r.social_group},
              {"age", r.age ? json(*r.age) : json(nullptr)},
              {"age_group", r.age_group},
              {"region", r.region},
              {"enterprise_type", to_string(r.enterprise.ownership)},
              {"enterprise_size", to_string(r.enterprise.size_class)},
              {"job_status", to_string(r.job.status)},
              {"social_security", to_string(r.job.social_security)}};
}

json to_json(const ClassifiedRecord& r) {
  json j = to_json(r.record);
  j["sector_class"] = to_string(r.sector);
  j["employment_class"] = to_string(r.employment);
  j["reassigned"] = r.reassigned;
  return j;
}

json to_json(const GroupPartition& p) {
  json groups = json::array();
  for (const auto& g : p.groups)
    groups.push_back({{"label", g.label},
                      {"count", g.count},
                      {"weight", g.weight},
                      {"P", g.P},
                      {"R", g.R},
                      {"mean", g.mean},
                      {"empty", g.empty}});
  return json{{"key", p.key}, {"total_weight", p.total_weight}, {"mean", p.mean}, {"groups", groups}};
}

json to_json(const DecompositionResult& r) {
  json rows = json::array();
  for (const auto& g : r.rows)
    rows.push_back({{"label", g.label},
                    {"count", g.count},
                    {"weight", g.weight},
                    {"P", g.P},
                    {"R", g.R},
                    {"mean", g.mean},
                    {"W", g.W},
                    {"index", to_json(g.index)},
                    {"C_w", g.C_w},
                    {"C_t_percent", g.C_t_percent},
                    {"empty", g.empty}});
  return json{{"key", r.key},
              {"alpha", r.alpha},
              {"total", to_json(r.total)},
              {"within", r.within},
              {"between", r.between},
              {"share_within_percent", r.share_within_percent},
              {"share_between_percent", r.share_between_percent},
              {"rows", rows},
              {"warnings", r.warnings}};
}

json to_json(const NestedDecompositionResult& r) {
  json inner = json::array();
  for (const auto& b : r.inner) {
    json block{{"outer_label", b.outer_label},
               {"outer_W", b.outer_W},
               {"empty", b.empty},
               {"within_percent_of_total", b.within_percent_of_total},
               {"between_percent_of_total", b.between_percent_of_total},
               {"leaf_C_t_percent", b.leaf_C_t_percent}};
    block["decomposition"] = b.empty ? json(nullptr) : to_json(b.local);
    inner.push_back(std::move(block));
  }
  return json{{"outer", to_json(r.outer)}, {"inner", inner}, {"total_percent", r.total_percent}};
}

json to_json(const ShareTable& t) {
  json rows = json::array();
  for (const auto& r : t.rows)
    rows.push_back({{"label", r.label},
                    {"formal_weight", r.formal_weight},
                    {"informal_weight", r.informal_weight},
                    {"weighted_count", r.weighted_count},
                    {"within_formal", r.pct_formal_within},
                    {"within_informal", r.pct_informal_within},
                    {"across_formal", r.pct_formal_across},
                    {"across_informal", r.pct_informal_across}});
  return json{{"category", category_name(t.category)},
              {"rows", rows},
              {"formal_weight", t.formal_weight},
              {"informal_weight", t.informal_weight},
              {"excluded_weight", t.excluded_weight},
              {"excluded_share", t.excluded_share}};
}

json to_json(const CrossTab& t) {
  json cells = json::array();
  for (const auto& [key, c] : t.cells)
    cells.push_back({{"primary", key.first},
                     {"secondary", key.second},
                     {"formal_weight", c.formal_weight},
                     {"informal_weight", c.informal_weight},
                     {"informal_share", c.informal_share}});
  return json{{"primary", category_name(t.primary)},
              {"secondary", category_name(t.secondary)},
              {"primary_labels", t.primary_labels},
              {"secondary_labels", t.secondary_labels},
              {"cells", cells},
              {"excluded_weight", t.excluded_weight},
              {"excluded_share", t.excluded_share}};
}

json to_json(const ValidationReport& r) {
  json groups = json::array(), cells = json::array(), identities = json::array(), discrepancies = json::array();
  for (const auto& g : r.groups)
    groups.push_back({{"level", g.level}, {"label", g.label}, {"W", g.W}, {"C_w", g.C_w}, {"C_t_percent", g.C_t_percent}});
  for (const auto& c : r.cells)
    cells.push_back({{"level", c.level},
                     {"label", c.label},
                     {"quantity", c.quantity},
                     {"recomputed", c.recomputed},
                     {"published", c.published},
                     {"deviation", c.deviation},
                     {"tolerance", c.tolerance},
                     {"pass", c.pass}});
  for (const auto& c : r.identities)
    identities.push_back({{"level", c.level},
                          {"name", c.name},
                          {"value", c.value},
                          {"expected", c.expected},
                          {"deviation", c.deviation},
                          {"tolerance", c.tolerance},
                          {"pass", c.pass}});
  for (const auto& d : r.discrepancies)
    discrepancies.push_back({{"level", d.level}, {"description", d.description}, {"first", d.first}, {"second", d.second}});
  return json{{"alpha", r.alpha},
              {"contributions_ok", r.contributions_ok},
              {"max_cw_deviation", r.max_cw_deviation},
              {"max_ct_deviation", r.max_ct_deviation},
              {"max_index_deviation", r.max_index_deviation},
              {"recomputed", groups},
              {"cells", cells},
              {"identities", identities},
              {"discrepancies", discrepancies}};
}

void write_csv(std::ostream& out, const DecompositionResult& r) {
  row(out, kDecompositionHeader);
  std::vector<double> pct;
  for (const auto& g : r.rows) pct.push_back(g.C_t_percent);
  decomposition_rows(out, r.key, r, r.total.value, r.share_within_percent, r.share_between_percent, pct);
}

void write_csv(std::ostream& out, const NestedDecompositionResult& r) {
  row(out, kDecompositionHeader);
  std::vector<double> pct;
  for (const auto& g : r.outer.rows) pct.push_back(g.C_t_percent);
  decomposition_rows(out, r.outer.key, r.outer, r.outer.total.value, r.outer.share_within_percent,
                     r.outer.share_between_percent, pct);
  for (const auto& b : r.inner) {
    if (b.empty) continue;
    decomposition_rows(out, b.outer_label, b.local, b.local.total.value, b.within_percent_of_total,
                       b.between_percent_of_total, b.leaf_C_t_percent);
  }
}

void write_csv(std::ostream& out, const ShareTable& t) {
  row(out, {std::string(category_name(t.category)), "within_formal", "within_informal", "across_formal",
            "across_informal", "weighted_count"});
  for (const auto& r : t.rows)
    row(out, {r.label, f2(r.pct_formal_within), f2(r.pct_informal_within), f2(r.pct_formal_across),
              f2(r.pct_informal_across), f2(r.weighted_count)});
}

void write_csv(std::ostream& out, const CrossTab& t) {
  row(out, {std::string(category_name(t.primary)), std::string(category_name(t.secondary)), "formal_weight",
            "informal_weight", "informal_share"});
  for (const auto& [key, c] : t.cells)
    row(out, {key.first, key.second, f2(c.formal_weight), f2(c.informal_weight),
              f3(c.informal_share)});
}

void write_csv(std::ostream& out, const ValidationReport& r) {
  row(out, {"kind", "level", "label", "quantity", "recomputed", "published", "deviation", "tolerance", "pass"});
  for (const auto& c : r.cells)
    row(out, {"cell", c.level, c.label, c.quantity, format_double(c.recomputed), format_double(c.published),
              format_double(c.deviation), format_double(c.tolerance), c.pass ? "true" : "false"});
  for (const auto& c : r.identities)
    row(out, {"identity", c.level, "", c.name, format_double(c.value), format_double(c.expected),
              format_double(c.deviation), format_double(c.tolerance), c.pass ? "true" : "false"});
  for (const auto& d : r.discrepancies)
    row(out, {"discrepancy", d.level, "", d.description, format_double(d.first), format_double(d.second),
              format_double(std::abs(d.first - d.second)), "", "false"});
}

void write_errors_csv(std::ostream& out, std::span<const ReadResult> results) {
  row(out, {"line", "field", "cause", "detail"});
  for (const auto& item : results)
    if (const auto* e = std::get_if<RecordError>(&item))
      row(out, {std::to_string(e->line), e->field, e->cause, e->detail});
}

namespace {

const std::vector<std::string> kRecordHeader = {
    "record_id",    "weight",     "mpce",      "occupation",      "industry",
    "sector",       "gender",     "social_group", "age",          "age_group",
    "region",       "enterprise_type", "enterprise_size", "job_status", "social_security"};

const std::vector<std::string> kClassifiedHeader = [] {
  auto h = kRecordHeader;
  h.push_back("sector_class");
  h.push_back("employment_class");
  return h;
}();

std::vector<std::string> record_fields(const ObservationRecord& r) {
  return {r.record_id, format_double(r.weight), format_double(r.mpce), r.occupation, r.industry, r.sector,
          r.gender, r.social_group, r.age ? std::to_string(*r.age) : "", r.age_group, r.region,
          std::string(to_string(r.enterprise.ownership)), std::string(to_string(r.enterprise.size_class)),
          std::string(to_string(r.job.status)), std::string(to_string(r.job.social_security))};
}

}  // namespace

void write_records_csv(std::ostream& out, std::span<const ObservationRecord> records) {
  row(out, kRecordHeader);
  for (const auto& r : records) row(out, record_fields(r));
}

void write_records_jsonl(std::ostream& out, std::span<const ObservationRecord> records) {
  for (const auto& r : records) out << to_json(r).dump() << '\n';
}

void write_classified_csv(std::ostream& out, std::span<const ClassifiedRecord> records) {
  row(out, kClassifiedHeader);
  for (const auto& c : records) {
    auto fields = record_fields(c.record);
    fields.emplace_back(to_string(c.sector));
    fields.emplace_back(to_string(c.employment));
    row(out, fields);
  }
}

void write_classified_jsonl(std::ostream& out, std::span<const ClassifiedRecord> records) {
  for (const auto& c : records) out << to_json(c).dump() << '\n';
}

std::vector<ClassifiedRecord> read_classified_csv(std::istream& in) {
  CsvReader reader(in);
  CsvRecord rec;
  if (!reader.next(rec) || rec.fields != kClassifiedHeader)
    throw FixtureError("classified CSV header does not match the expected schema");
  std::vector<ClassifiedRecord> out;
  while (reader.next(rec)) {
    if (rec.fields.size() == 1 && rec.fields[0].empty()) continue;
    const std::string where = "classified CSV line " + std::to_string(rec.line) + ": ";
    if (rec.fields.size() != kClassifiedHeader.size()) throw FixtureError(where + "wrong column count");
    const auto& f = rec.fields;
    ClassifiedRecord c;
    auto& r = c.record;
    r.record_id = f[0];
    const auto w = detail::parse_double(f[1]);
    const auto m = detail::parse_double(f[2]);
    if (!w || !m) throw FixtureError(where + "weight and mpce must be numbers");
    r.weight = *w;
    r.mpce = *m;
    r.occupation = f[3];
    r.industry = f[4];
    r.sector = f[5];
    r.gender = f[6];
    r.social_group = f[7];
    if (!f[8].empty()) {
      const auto a = detail::parse_int(f[8]);
      if (!a) throw FixtureError(where + "age must be an integer");
      r.age = static_cast<int>(*a);
    }
    r.age_group = f[9];
    r.region = f[10];
    const auto own = parse_ownership(f[11]);
    const auto size = parse_size_class(f[12]);
    const auto status = parse_job_status(f[13]);
    const auto ss = parse_social_security(f[14]);
    const auto sector = parse_sector_class(f[15]);
    const auto employment = parse_employment_class(f[16]);
    if (!own || !size || !status || !ss || !sector || !employment)
      throw FixtureError(where + "unknown enumeration label");
    r.enterprise = {*own, *size};
    r.job = {*status, *ss};
    c.sector = *sector;
    c.employment = *employment;
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace informality
