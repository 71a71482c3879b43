#include "informality/decompose.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "informality/detail/reduction.hpp"

namespace informality {
namespace {

detail::Columns columns_of(const GroupedSample& s) {
  return detail::Columns{s.values, s.weights, s.groups, s.labels.size(), true};
}

void check_labels(const std::vector<std::string>& labels) {
  auto sorted = labels;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw StatsError("size-mismatch", "group labels are not unique");
}

GroupPartition build_partition(const GroupedSample& s, const std::vector<detail::SlotMoments>& m) {
  const std::size_t pooled = s.labels.size();
  GroupPartition p;
  p.key = s.key;
  p.total_weight = m[pooled].weight.value();
  if (s.values.empty() || !(p.total_weight > 0.0))
    throw StatsError("empty-sample", "no item with positive weight");
  p.mean = m[pooled].mean();
  p.groups.reserve(pooled);
  for (std::size_t j = 0; j < pooled; ++j) {
    GroupShare g;
    g.label = s.labels[j];
    g.count = m[j].count;
    g.weight = m[j].weight.value();
    if (g.weight > 0.0) {
      g.P = g.weight / p.total_weight;
      g.mean = m[j].mean();
      g.R = g.P * g.mean / p.mean;
    } else {
      g.empty = true;
    }
    p.groups.push_back(std::move(g));
  }
  return p;
}

double share_power_weight(double P, double R, double alpha) {
  if (P == 0.0) return 0.0;
  return std::pow(R, alpha) * std::pow(P, 1.0 - alpha);
}

}  // namespace

GroupedSample GroupedSample::from_labels(std::string key, std::vector<double> values,
                                         std::vector<double> weights,
                                         std::span<const std::string> item_labels,
                                         std::span<const std::string> declared) {
  if (item_labels.size() != values.size())
    throw StatsError("size-mismatch", "one label per item is required");
  std::map<std::string, std::uint32_t> index;
  for (const auto& l : declared) index.emplace(l, 0);
  for (const auto& l : item_labels) index.emplace(l, 0);
  GroupedSample s;
  s.key = std::move(key);
  s.labels.reserve(index.size());
  for (auto& [label, id] : index) {
    id = static_cast<std::uint32_t>(s.labels.size());
    s.labels.push_back(label);
  }
  s.groups.reserve(item_labels.size());
  for (const auto& l : item_labels) s.groups.push_back(index.at(l));
  s.values = std::move(values);
  s.weights = std::move(weights);
  return s;
}

WeightedSample GroupedSample::pooled() const { return WeightedSample(values, weights); }

WeightedSample GroupedSample::group_sample(std::size_t group) const {
  std::vector<double> v, w;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (groups[i] == group) {
      v.push_back(values[i]);
      w.push_back(weights[i]);
    }
  }
  return WeightedSample(std::move(v), std::move(w));
}

GroupPartition partition(const GroupedSample& sample, const ComputeOptions& options) {
  check_labels(sample.labels);
  const auto columns = columns_of(sample);
  detail::validate_columns(columns);
  return build_partition(sample, detail::accumulate_moments(columns, options));
}

std::vector<double> subgroup_weights(const GroupPartition& p, double alpha, WeightForm form) {
  check_alpha(alpha);
  std::vector<double> out;
  out.reserve(p.groups.size());
  for (const auto& g : p.groups) {
    if (g.empty || g.P == 0.0) {
      out.push_back(0.0);
    } else if (form == WeightForm::SharePower) {
      out.push_back(share_power_weight(g.P, g.R, alpha));
    } else {
      out.push_back(g.P * std::pow(g.mean / p.mean, alpha));
    }
  }
  return out;
}

bool DecompositionResult::degenerate() const {
  return std::find(warnings.begin(), warnings.end(), "degenerate-total") != warnings.end();
}

DecompositionResult decompose(const GroupedSample& sample, double alpha, const ComputeOptions& options) {
  check_alpha(alpha);
  check_labels(sample.labels);
  const auto columns = columns_of(sample);
  detail::validate_columns(columns);
  const auto moments = detail::accumulate_moments(columns, options);
  const GroupPartition p = build_partition(sample, moments);
  const std::size_t pooled = sample.labels.size();

  std::vector<double> means(pooled + 1, 1.0);
  for (std::size_t j = 0; j < pooled; ++j)
    if (!p.groups[j].empty) means[j] = p.groups[j].mean;
  means[pooled] = p.mean;
  const auto terms = detail::accumulate_ge_terms(columns, means, alpha, options);

  DecompositionResult r;
  r.key = sample.key;
  r.alpha = alpha;
  r.total = detail::finish_ge(alpha, terms[pooled].value(), p.total_weight, moments[pooled].constant());
  if (r.total.clamped) r.warnings.push_back("clamped-index");

  const auto W = subgroup_weights(p, alpha);
  CompensatedSum within;
  r.rows.reserve(pooled);
  for (std::size_t j = 0; j < pooled; ++j) {
    const GroupShare& g = p.groups[j];
    DecompositionRow row;
    row.label = g.label;
    row.count = g.count;
    row.weight = g.weight;
    row.P = g.P;
    row.R = g.R;
    row.mean = g.mean;
    row.W = W[j];
    row.empty = g.empty;
    row.index.alpha = alpha;
    if (g.empty) {
      r.warnings.push_back("empty-group:" + g.label);
    } else {
      row.index = detail::finish_ge(alpha, terms[j].value(), g.weight, moments[j].constant());
      if (row.index.clamped) r.warnings.push_back("clamped-index");
    }
    row.C_w = row.W * row.index.value;
    within.add(row.C_w);
    r.rows.push_back(std::move(row));
  }
  r.within = within.value();
  r.between = r.total.value - r.within;
  if (r.between < 0.0) r.warnings.push_back("negative-between");

  if (r.total.value == 0.0) {
    r.warnings.push_back("degenerate-total");
  } else {
    for (auto& row : r.rows) row.C_t_percent = 100.0 * row.C_w / r.total.value;
    r.share_within_percent = 100.0 * r.within / r.total.value;
    r.share_between_percent = 100.0 * r.between / r.total.value;
  }
  return r;
}

NestedSample NestedSample::from_labels(std::string outer_key, std::string inner_key,
                                       std::vector<double> values, std::vector<double> weights,
                                       std::span<const std::string> outer_item_labels,
                                       std::span<const std::string> inner_item_labels) {
  if (inner_item_labels.size() != values.size())
    throw StatsError("size-mismatch", "one inner label per item is required");
  auto outer_full = GroupedSample::from_labels(std::move(outer_key), std::move(values), std::move(weights),
                                               outer_item_labels);
  auto inner = GroupedSample::from_labels(std::move(inner_key), {}, {}, {}, inner_item_labels);
  std::map<std::string, std::uint32_t> inner_index;
  for (std::uint32_t j = 0; j < inner.labels.size(); ++j) inner_index.emplace(inner.labels[j], j);

  NestedSample s;
  s.outer_key = std::move(outer_full.key);
  s.inner_key = std::move(inner.key);
  s.outer_labels = std::move(outer_full.labels);
  s.inner_labels = std::move(inner.labels);
  s.values = std::move(outer_full.values);
  s.weights = std::move(outer_full.weights);
  s.outer = std::move(outer_full.groups);
  s.inner.reserve(inner_item_labels.size());
  for (const auto& l : inner_item_labels) s.inner.push_back(inner_index.at(l));
  return s;
}

GroupedSample NestedSample::outer_sample() const {
  return GroupedSample{outer_key, outer_labels, values, weights, outer};
}

GroupedSample NestedSample::inner_sample(std::size_t outer_group) const {
  GroupedSample s;
  s.key = inner_key;
  s.labels = inner_labels;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (outer[i] != outer_group) continue;
    s.values.push_back(values[i]);
    s.weights.push_back(weights[i]);
    s.groups.push_back(inner[i]);
  }
  return s;
}

NestedDecompositionResult nested_decompose(const NestedSample& sample, double alpha,
                                           const ComputeOptions& options) {
  if (sample.outer.size() != sample.values.size() || sample.inner.size() != sample.values.size())
    throw StatsError("size-mismatch", "outer and inner keys must cover every item");
  NestedDecompositionResult result;
  result.outer = decompose(sample.outer_sample(), alpha, options);
  const double grand = result.outer.total.value;
  const bool degenerate = grand == 0.0;

  CompensatedSum total_percent;
  for (std::size_t g = 0; g < sample.outer_labels.size(); ++g) {
    const auto& outer_row = result.outer.rows[g];
    InnerBlock block;
    block.outer_label = outer_row.label;
    block.outer_W = outer_row.W;
    if (outer_row.empty) {
      block.empty = true;
      result.inner.push_back(std::move(block));
      continue;
    }
    block.local = decompose(sample.inner_sample(g), alpha, options);
    block.leaf_C_t_percent.reserve(block.local.rows.size());
    for (const auto& row : block.local.rows) {
      const double leaf = degenerate ? 0.0 : 100.0 * block.outer_W * row.C_w / grand;
      block.leaf_C_t_percent.push_back(leaf);
      total_percent.add(leaf);
    }
    if (!degenerate) {
      block.within_percent_of_total = 100.0 * block.outer_W * block.local.within / grand;
      block.between_percent_of_total = 100.0 * block.outer_W * block.local.between / grand;
    }
    total_percent.add(block.between_percent_of_total);
    result.inner.push_back(std::move(block));
  }
  total_percent.add(result.outer.share_between_percent);
  result.total_percent = total_percent.value();
  return result;
}

}  // namespace informality
