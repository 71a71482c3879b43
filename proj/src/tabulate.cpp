#include "informality/tabulate.hpp"

#include <set>

#include "informality/stats.hpp"

namespace informality {

ShareTable share_table(std::span<const ClassifiedRecord> records, Category category) {
  std::map<std::string, std::pair<CompensatedSum, CompensatedSum>> acc;
  CompensatedSum formal, informal, excluded;
  for (const auto& r : records) {
    auto& slot = acc[category_value(r, category)];
    switch (r.employment) {
      case EmploymentClass::Formal:
        slot.first.add(r.record.weight);
        formal.add(r.record.weight);
        break;
      case EmploymentClass::Informal:
        slot.second.add(r.record.weight);
        informal.add(r.record.weight);
        break;
      case EmploymentClass::Indeterminate:
        excluded.add(r.record.weight);
        break;
    }
  }

  ShareTable t;
  t.category = category;
  t.formal_weight = formal.value();
  t.informal_weight = informal.value();
  t.excluded_weight = excluded.value();
  const double classified = t.formal_weight + t.informal_weight;
  if (!(classified > 0.0))
    throw StatsError("empty-sample", "no formal or informal weight for '" + std::string(category_name(category)) + "'");
  t.excluded_share = t.excluded_weight / (classified + t.excluded_weight);

  for (const auto& [label, sums] : acc) {
    ShareRow row;
    row.label = label;
    row.formal_weight = sums.first.value();
    row.informal_weight = sums.second.value();
    row.weighted_count = row.formal_weight + row.informal_weight;
    if (row.weighted_count > 0.0) {
      row.pct_formal_within = 100.0 * row.formal_weight / row.weighted_count;
      row.pct_informal_within = 100.0 * row.informal_weight / row.weighted_count;
    }
    if (t.formal_weight > 0.0) row.pct_formal_across = 100.0 * row.formal_weight / t.formal_weight;
    if (t.informal_weight > 0.0) row.pct_informal_across = 100.0 * row.informal_weight / t.informal_weight;
    t.rows.push_back(std::move(row));
  }
  return t;
}

CrossCell CrossTab::marginal(const std::string& primary_label) const {
  CompensatedSum f, i;
  for (const auto& s : secondary_labels) {
    auto it = cells.find({primary_label, s});
    if (it == cells.end()) continue;
    f.add(it->second.formal_weight);
    i.add(it->second.informal_weight);
  }
  CrossCell c{f.value(), i.value(), 0.0};
  const double total = c.formal_weight + c.informal_weight;
  if (total > 0.0) c.informal_share = c.informal_weight / total;
  return c;
}

CrossTab cross_tab(std::span<const ClassifiedRecord> records, Category secondary, Category primary) {
  std::map<std::pair<std::string, std::string>, std::pair<CompensatedSum, CompensatedSum>> acc;
  std::set<std::string> primaries, secondaries;
  CompensatedSum classified, excluded;
  for (const auto& r : records) {
    if (r.employment == EmploymentClass::Indeterminate) {
      excluded.add(r.record.weight);
      continue;
    }
    const auto p = category_value(r, primary);
    const auto s = category_value(r, secondary);
    primaries.insert(p);
    secondaries.insert(s);
    auto& slot = acc[{p, s}];
    (r.employment == EmploymentClass::Formal ? slot.first : slot.second).add(r.record.weight);
    classified.add(r.record.weight);
  }
  if (!(classified.value() > 0.0))
    throw StatsError("empty-sample", "no formal or informal weight for the cross-tabulation");

  CrossTab t;
  t.primary = primary;
  t.secondary = secondary;
  t.primary_labels.assign(primaries.begin(), primaries.end());
  t.secondary_labels.assign(secondaries.begin(), secondaries.end());
  t.excluded_weight = excluded.value();
  t.excluded_share = t.excluded_weight / (classified.value() + t.excluded_weight);
  for (const auto& [key, sums] : acc) {
    CrossCell c{sums.first.value(), sums.second.value(), 0.0};
    const double total = c.formal_weight + c.informal_weight;
    if (total > 0.0) c.informal_share = c.informal_weight / total;
    t.cells.emplace(key, c);
  }
  return t;
}

}  // namespace informality
