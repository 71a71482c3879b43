#include "informality/published_table.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>

#include "informality/csv.hpp"
#include "informality/detail/text.hpp"

namespace informality {
namespace {

const std::vector<std::string> kHeader = {"level", "label", "P", "R", "GEI", "C_w_published",
                                          "C_t_published"};

std::optional<double> cell(const std::string& text, std::size_t line, const char* column) {
  const auto t = detail::trim(text);
  if (t.empty() || t == "-") return std::nullopt;
  auto v = detail::parse_double(t);
  if (!v || !std::isfinite(*v))
    throw FixtureError("line " + std::to_string(line) + ": column " + column + " is not a number: '" +
                       std::string(t) + "'");
  return v;
}

struct Block {
  std::string level;
  const PublishedRow* header = nullptr;
  const PublishedRow* within = nullptr;
  const PublishedRow* between = nullptr;
  std::vector<const PublishedRow*> groups;
};

double require(const std::optional<double>& v, const PublishedRow& row, const char* what) {
  if (!v) throw FixtureError("row " + row.level + "/" + row.label + " lacks " + what);
  return *v;
}

class Checker {
 public:
  explicit Checker(ValidationReport& report) : report_(report) {}

  void cell(const std::string& level, const std::string& label, const std::string& quantity,
            double recomputed, const std::optional<double>& published, double tolerance) {
    if (!published) return;
    CellCheck c{level, label, quantity, recomputed, *published, std::fabs(recomputed - *published),
                tolerance, false};
    c.pass = c.deviation <= tolerance;
    if (quantity == "C_w")
      report_.max_cw_deviation = std::max(report_.max_cw_deviation, c.deviation);
    else if (quantity == "I_w" || quantity == "I_b")
      report_.max_index_deviation = std::max(report_.max_index_deviation, c.deviation);
    else
      report_.max_ct_deviation = std::max(report_.max_ct_deviation, c.deviation);
    report_.contributions_ok = report_.contributions_ok && c.pass;
    report_.cells.push_back(std::move(c));
  }

  void identity(const std::string& level, const std::string& name, double value, double expected,
                double tolerance) {
    IdentityCheck c{level, name, value, expected, std::fabs(value - expected), tolerance, false};
    c.pass = c.deviation <= tolerance;
    report_.identities.push_back(std::move(c));
  }

 private:
  ValidationReport& report_;
};

}  // namespace

PublishedTable parse_published_table(std::istream& in) {
  CsvReader reader(in);
  CsvRecord record;
  if (!reader.next(record)) throw FixtureError("empty fixture");
  std::vector<std::string> header;
  for (const auto& f : record.fields) header.emplace_back(detail::trim(f));
  if (header != kHeader)
    throw FixtureError("fixture header must be: level,label,P,R,GEI,C_w_published,C_t_published");

  PublishedTable table;
  while (reader.next(record)) {
    if (record.fields.size() == 1 && detail::trim(record.fields[0]).empty()) continue;
    if (!record.fields.empty() && detail::trim(record.fields[0]).starts_with("#")) continue;
    if (record.unterminated || record.fields.size() != kHeader.size())
      throw FixtureError("line " + std::to_string(record.line) + ": expected 7 columns");
    PublishedRow row;
    row.level = std::string(detail::trim(record.fields[0]));
    row.label = std::string(detail::trim(record.fields[1]));
    if (row.level.empty() || row.label.empty())
      throw FixtureError("line " + std::to_string(record.line) + ": level and label are required");
    row.P = cell(record.fields[2], record.line, "P");
    row.R = cell(record.fields[3], record.line, "R");
    row.GEI = cell(record.fields[4], record.line, "GEI");
    row.C_w = cell(record.fields[5], record.line, "C_w_published");
    row.C_t = cell(record.fields[6], record.line, "C_t_published");
    table.rows.push_back(std::move(row));
  }
  return table;
}

PublishedTable load_published_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FixtureError("cannot open fixture " + path.string());
  return parse_published_table(in);
}

ValidationReport validate_published_table(const PublishedTable& table, double alpha,
                                          const ValidationTolerances& tol) {
  check_alpha(alpha);
  std::vector<Block> blocks;
  std::map<std::string, std::size_t> block_index;
  for (const auto& row : table.rows) {
    auto [it, inserted] = block_index.emplace(row.level, blocks.size());
    if (inserted) blocks.push_back(Block{row.level, nullptr, nullptr, nullptr, {}});
    Block& b = blocks[it->second];
    const PublishedRow** slot = row.label == "I"     ? &b.header
                                : row.label == "I_w" ? &b.within
                                : row.label == "I_b" ? &b.between
                                                     : nullptr;
    if (slot) {
      if (*slot) throw FixtureError("duplicate summary row " + row.level + "/" + row.label);
      *slot = &row;
    } else {
      for (const auto* g : b.groups)
        if (g->label == row.label) throw FixtureError("duplicate row " + row.level + "/" + row.label);
      b.groups.push_back(&row);
    }
  }
  if (!block_index.contains("outer")) throw FixtureError("fixture has no 'outer' block");
  const Block& outer = blocks[block_index.at("outer")];
  if (!outer.header || !outer.header->GEI) throw FixtureError("outer block lacks the total index row I");
  if (outer.groups.empty()) throw FixtureError("outer block has no group rows");
  const double total = *outer.header->GEI;
  if (!(total > 0.0)) throw FixtureError("total index must be positive");

  ValidationReport report;
  report.alpha = alpha;
  Checker check(report);

  struct OuterGroup {
    double W;
    double index;
    std::optional<double> C_t;
  };
  std::map<std::string, OuterGroup> outer_groups;

  auto group_weight = [alpha](double P, double R) {
    return P == 0.0 ? 0.0 : std::pow(R, alpha) * std::pow(P, 1.0 - alpha);
  };

  // Outer split.
  {
    CompensatedSum within, sum_P, sum_R, published_ct;
    for (const auto* row : outer.groups) {
      const double P = require(row->P, *row, "P");
      const double R = require(row->R, *row, "R");
      const double gei = require(row->GEI, *row, "GEI");
      const double W = group_weight(P, R);
      const double C_w = W * gei;
      const double C_t = 100.0 * C_w / total;
      report.groups.push_back({outer.level, row->label, W, C_w, C_t});
      check.cell(outer.level, row->label, "C_w", C_w, row->C_w, tol.contribution);
      check.cell(outer.level, row->label, "C_t", C_t, row->C_t, tol.percent);
      within.add(C_w);
      sum_P.add(P);
      sum_R.add(R);
      if (row->C_t) published_ct.add(*row->C_t);
      outer_groups.emplace(row->label, OuterGroup{W, gei, row->C_t});
    }
    const double I_w = within.value();
    const double I_b = total - I_w;
    if (outer.within) {
      check.cell(outer.level, "I_w", "I_w", I_w, outer.within->GEI, tol.contribution);
      check.cell(outer.level, "I_w", "share_within", 100.0 * I_w / total, outer.within->C_t, tol.percent);
    }
    if (outer.between) {
      check.cell(outer.level, "I_b", "I_b", I_b, outer.between->GEI, tol.contribution);
      check.cell(outer.level, "I_b", "share_between", 100.0 * I_b / total, outer.between->C_t, tol.percent);
    }
    check.identity(outer.level, "sum P = 1", sum_P.value(), 1.0, tol.share_sum);
    check.identity(outer.level, "sum R = 1", sum_R.value(), 1.0, tol.share_sum);
    if (outer.within && outer.between && outer.within->GEI && outer.between->GEI)
      check.identity(outer.level, "published I_w + I_b = I", *outer.within->GEI + *outer.between->GEI,
                     total, tol.index);
    if (outer.within && outer.between && outer.within->C_t && outer.between->C_t)
      check.identity(outer.level, "published within% + between% = 100",
                     *outer.within->C_t + *outer.between->C_t, 100.0, tol.percent);
    if (outer.between && outer.between->C_t)
      check.identity(outer.level, "published sum C_t + between% = 100",
                     published_ct.value() + *outer.between->C_t, 100.0, tol.percent);
  }

  // Inner blocks, expressed against the grand total.
  CompensatedSum grand_published;
  bool grand_complete = outer.between && outer.between->C_t;
  if (grand_complete) grand_published.add(*outer.between->C_t);
  std::size_t inner_blocks = 0;
  for (const auto& b : blocks) {
    if (b.level == "outer") continue;
    ++inner_blocks;
    auto og = outer_groups.find(b.level);
    if (og == outer_groups.end())
      throw FixtureError("inner block '" + b.level + "' does not match an outer group");
    const auto [W_g, I_g, C_t_g] = og->second;
    if (b.header && b.header->GEI && std::fabs(*b.header->GEI - I_g) > tol.index) {
      report.discrepancies.push_back(
          {b.level, "group index in the outer split differs from the inner block header", I_g,
           *b.header->GEI});
    }

    CompensatedSum within, sum_P, sum_R, published_leaf;
    for (const auto* row : b.groups) {
      const double P = require(row->P, *row, "P");
      const double R = require(row->R, *row, "R");
      const double gei = require(row->GEI, *row, "GEI");
      const double W = group_weight(P, R);
      const double C_w = W * gei;
      const double C_t = 100.0 * W_g * C_w / total;
      report.groups.push_back({b.level, row->label, W, C_w, C_t});
      check.cell(b.level, row->label, "C_w", C_w, row->C_w, tol.contribution);
      check.cell(b.level, row->label, "C_t", C_t, row->C_t, tol.percent);
      within.add(C_w);
      sum_P.add(P);
      sum_R.add(R);
      if (row->C_t) published_leaf.add(*row->C_t);
    }
    const double I_w = within.value();
    const double I_b = I_g - I_w;
    if (b.within) {
      check.cell(b.level, "I_w", "I_w", I_w, b.within->GEI, tol.contribution);
      check.cell(b.level, "I_w", "share_within", 100.0 * W_g * I_w / total, b.within->C_t, tol.percent);
    }
    if (b.between) {
      check.cell(b.level, "I_b", "I_b", I_b, b.between->GEI, tol.contribution);
      check.cell(b.level, "I_b", "share_between", 100.0 * W_g * I_b / total, b.between->C_t, tol.percent);
    }
    check.identity(b.level, "sum P = 1", sum_P.value(), 1.0, tol.share_sum);
    check.identity(b.level, "sum R = 1", sum_R.value(), 1.0, tol.share_sum);
    if (b.within && b.between && b.within->GEI && b.between->GEI) {
      const double published_sum = *b.within->GEI + *b.between->GEI;
      check.identity(b.level, "published I_w + I_b = group index (outer)", published_sum, I_g, tol.index);
      if (b.header && b.header->GEI)
        check.identity(b.level, "published I_w + I_b = group index (header)", published_sum,
                       *b.header->GEI, tol.index);
    }
    if (b.within && b.within->C_t)
      check.identity(b.level, "published sum leaf C_t = within%", published_leaf.value(), *b.within->C_t,
                     tol.percent);
    if (b.between && b.between->C_t && C_t_g)
      check.identity(b.level, "published sum leaf C_t + between% = outer C_t",
                     published_leaf.value() + *b.between->C_t, *C_t_g, tol.percent);
    if (b.between && b.between->C_t) {
      grand_published.merge(published_leaf);
      grand_published.add(*b.between->C_t);
    } else {
      grand_complete = false;
    }
  }
  if (inner_blocks == outer_groups.size() && grand_complete)
    check.identity("all", "published leaves + between terms = 100", grand_published.value(), 100.0,
                   2 * tol.percent);
  return report;
}

}  // namespace informality
