#pragma once

#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "informality/taxonomy.hpp"

namespace informality {

struct ShareRow {
  std::string label;
  double formal_weight = 0.0;
  double informal_weight = 0.0;
  /// formal_weight + informal_weight.
  double weighted_count = 0.0;
  double pct_formal_within = 0.0;
  double pct_informal_within = 0.0;
  /// Row's share of all formal weight.
  double pct_formal_across = 0.0;
  /// Row's share of all informal weight.
  double pct_informal_across = 0.0;
};

/// Formal/informal shares within each value of a category and the spread of
/// each class across values. Rows are sorted by label. Indeterminate records
/// are left out of every denominator; their weight is disclosed.
struct ShareTable {
  Category category = Category::Occupation;
  std::vector<ShareRow> rows;
  double formal_weight = 0.0;
  double informal_weight = 0.0;
  double excluded_weight = 0.0;
  /// excluded_weight over all weight, Indeterminate included.
  double excluded_share = 0.0;
};

/// Throws StatsError("empty-sample") when no Formal/Informal weight remains.
ShareTable share_table(std::span<const ClassifiedRecord> records, Category category);

struct CrossCell {
  double formal_weight = 0.0;
  double informal_weight = 0.0;
  /// Informal weight over cell weight; 0 for an empty cell.
  double informal_share = 0.0;
};

struct CrossTab {
  Category primary = Category::Occupation;
  Category secondary = Category::Sector;
  std::vector<std::string> primary_labels;
  std::vector<std::string> secondary_labels;
  std::map<std::pair<std::string, std::string>, CrossCell> cells;
  double excluded_weight = 0.0;
  double excluded_share = 0.0;

  /// Sums over secondary labels for one primary label.
  CrossCell marginal(const std::string& primary_label) const;
};

CrossTab cross_tab(std::span<const ClassifiedRecord> records, Category secondary,
                   Category primary = Category::Occupation);

}  // namespace informality
