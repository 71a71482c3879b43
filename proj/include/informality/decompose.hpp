#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "informality/stats.hpp"

namespace informality {

/// Columnar sample whose items each carry a group id into `labels`.
struct GroupedSample {
  std::string key;
  std::vector<std::string> labels;
  std::vector<double> values;
  std::vector<double> weights;
  std::vector<std::uint32_t> groups;

  /// Builds the label set from per-item labels, sorted lexicographically.
  /// `declared` labels are kept even when no item carries them.
  static GroupedSample from_labels(std::string key, std::vector<double> values,
                                   std::vector<double> weights,
                                   std::span<const std::string> item_labels,
                                   std::span<const std::string> declared = {});

  std::size_t size() const noexcept { return values.size(); }
  WeightedSample pooled() const;
  /// Throws StatsError("empty-sample") for a group with no positive weight.
  WeightedSample group_sample(std::size_t group) const;
};

struct GroupShare {
  std::string label;
  std::size_t count = 0;
  double weight = 0.0;
  /// Population share.
  double P = 0.0;
  /// Income share, P * mean / pooled mean.
  double R = 0.0;
  double mean = 0.0;
  /// Zero total weight; P = R = 0.
  bool empty = false;
};

struct GroupPartition {
  std::string key;
  double total_weight = 0.0;
  double mean = 0.0;
  std::vector<GroupShare> groups;
};

GroupPartition partition(const GroupedSample& sample, const ComputeOptions& options = {});

enum class WeightForm {
  /// R^a * P^(1-a)
  SharePower,
  /// P * (mean_j / mean)^a
  MeanRatio,
};

/// Within-group weight of each group; zero for empty groups.
std::vector<double> subgroup_weights(const GroupPartition& partition, double alpha,
                                     WeightForm form = WeightForm::SharePower);

struct DecompositionRow {
  std::string label;
  std::size_t count = 0;
  double weight = 0.0;
  double P = 0.0;
  double R = 0.0;
  double mean = 0.0;
  double W = 0.0;
  GEIndex index;
  /// Contribution to within-group inequality, W * I_j.
  double C_w = 0.0;
  /// Contribution to total inequality, in percent.
  double C_t_percent = 0.0;
  bool empty = false;
};

struct DecompositionResult {
  std::string key;
  double alpha = kDefaultAlpha;
  GEIndex total;
  double within = 0.0;
  /// Residual total - within; may be negative.
  double between = 0.0;
  double share_within_percent = 0.0;
  double share_between_percent = 0.0;
  std::vector<DecompositionRow> rows;
  /// "degenerate-total", "negative-between", "clamped-index", "empty-group:<label>".
  std::vector<std::string> warnings;

  bool degenerate() const;
};

/// Single-level subgroup decomposition with the between term taken as the
/// residual. A zero total index yields zero contributions and a
/// "degenerate-total" warning.
DecompositionResult decompose(const GroupedSample& sample, double alpha,
                              const ComputeOptions& options = {});

/// Items keyed by an outer and an inner category.
struct NestedSample {
  std::string outer_key;
  std::string inner_key;
  std::vector<std::string> outer_labels;
  std::vector<std::string> inner_labels;
  std::vector<double> values;
  std::vector<double> weights;
  std::vector<std::uint32_t> outer;
  std::vector<std::uint32_t> inner;

  static NestedSample from_labels(std::string outer_key, std::string inner_key,
                                  std::vector<double> values, std::vector<double> weights,
                                  std::span<const std::string> outer_item_labels,
                                  std::span<const std::string> inner_item_labels);

  GroupedSample outer_sample() const;
  /// Items of one outer group, grouped by the inner key.
  GroupedSample inner_sample(std::size_t outer_group) const;
};

struct InnerBlock {
  std::string outer_label;
  /// Outer group's within weight.
  double outer_W = 0.0;
  /// The outer group's own decomposition (its C_t relative to its own index).
  DecompositionResult local;
  /// Per inner row, 100 * W_g * W_gj * I_gj / I_total.
  std::vector<double> leaf_C_t_percent;
  double within_percent_of_total = 0.0;
  double between_percent_of_total = 0.0;
  bool empty = false;
};

struct NestedDecompositionResult {
  DecompositionResult outer;
  std::vector<InnerBlock> inner;
  /// Sum of every leaf, every inner between term and the outer between term.
  double total_percent = 0.0;
};

NestedDecompositionResult nested_decompose(const NestedSample& sample, double alpha,
                                           const ComputeOptions& options = {});

}  // namespace informality
