#pragma once

// Blocked, order-fixed reductions over (value, weight, group) columns. Shared
// by the index and decomposition code.

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "informality/stats.hpp"

namespace informality::detail {

/// Column view over a possibly grouped sample. An empty `groups` span means
/// every item belongs to slot 0.
struct Columns {
  std::span<const double> values;
  std::span<const double> weights;
  std::span<const std::uint32_t> groups;
  std::size_t group_count = 1;
  /// When set, an extra trailing slot accumulates every item.
  bool with_pooled = false;

  std::size_t slot_count() const noexcept { return group_count + (with_pooled ? 1 : 0); }
};

struct SlotMoments {
  CompensatedSum weight;
  CompensatedSum weighted_value;
  std::size_t count = 0;
  /// Extremes over items with positive weight.
  double min = std::numeric_limits<double>::infinity();
  double max = -std::numeric_limits<double>::infinity();

  double mean() const noexcept { return weighted_value.value() / weight.value(); }
  bool constant() const noexcept { return !(min < max); }
};

/// First pass: weight, weighted value, count and positive-weight extremes
/// for every slot.
std::vector<SlotMoments> accumulate_moments(const Columns& columns, const ComputeOptions& options);

/// Second pass: sum_i w_i * t(y_i / mean_slot) per slot, where t is the
/// per-item term of the GE form that `alpha` selects (r^a - 1 for the
/// general form, -ln r for MLD, r ln r for Theil) less its first-order part
/// a (r - 1), which sums to zero.
std::vector<CompensatedSum> accumulate_ge_terms(const Columns& columns,
                                                std::span<const double> slot_means, double alpha,
                                                const ComputeOptions& options);

/// Turns slot sums into an index value, applying the 1/(a^2-a) factor and
/// clamping negative rounding residue.
GEIndex finish_ge(double alpha, double term_sum, double total_weight, bool constant);

/// Validates columns and throws StatsError on bad values, weights, group ids
/// or mismatched lengths.
void validate_columns(const Columns& columns);

}  // namespace informality::detail
