#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace informality {

/// Error raised by the statistics layer. `code()` is a stable machine-readable
/// tag ("empty-sample", "nonpositive-value", "negative-weight",
/// "size-mismatch", "non-finite", "degenerate-total").
class StatsError : public std::runtime_error {
 public:
  StatsError(std::string code, const std::string& detail);
  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

/// Neumaier compensated accumulator. Merging adds the other accumulator's
/// running sum and then its compensation, so a fixed merge order gives a
/// fixed result.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if ((sum_ >= 0 ? sum_ : -sum_) >= (x >= 0 ? x : -x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  void merge(const CompensatedSum& other) noexcept {
    add(other.sum_);
    add(other.comp_);
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Thread count for the blocked reductions. 0 means hardware concurrency.
/// Results never depend on this value: work is split into fixed-size blocks
/// and block partials are merged in block order.
struct ComputeOptions {
  unsigned threads = 1;
};

inline constexpr double kDefaultAlpha = 1.3;
/// Half-width of the windows around 0 and 1 where the limiting forms are used.
inline constexpr double kLimitEpsilon = 1e-9;
/// Items per reduction block.
inline constexpr std::size_t kReductionBlock = std::size_t{1} << 15;

/// Positive values with non-negative survey weights; the empirical
/// distribution over which indices are evaluated.
class WeightedSample {
 public:
  /// Throws StatsError unless every value is finite and > 0, every weight is
  /// finite and >= 0, and the total weight is > 0.
  WeightedSample(std::vector<double> values, std::vector<double> weights);

  static WeightedSample unweighted(std::vector<double> values);

  std::span<const double> values() const noexcept { return values_; }
  std::span<const double> weights() const noexcept { return weights_; }
  std::size_t size() const noexcept { return values_.size(); }
  double total_weight() const noexcept { return total_weight_; }

 private:
  std::vector<double> values_;
  std::vector<double> weights_;
  double total_weight_ = 0.0;
};

struct GEIndex {
  double alpha = kDefaultAlpha;
  double value = 0.0;
  /// Set when a slightly negative rounding result was clamped to zero.
  bool clamped = false;
};

enum class GEForm { MeanLogDeviation, Theil, General };

/// Which evaluation branch `alpha` selects.
GEForm ge_form(double alpha);

double weighted_mean(const WeightedSample& sample, const ComputeOptions& options = {});

/// Generalized Entropy index
///   I = (1/(a^2 - a)) * (sum_i w_i (y_i/mu)^a / sum_i w_i - 1),
/// with the mean log deviation at a = 0 and the Theil index at a = 1.
GEIndex ge_index(const WeightedSample& sample, double alpha,
                 const ComputeOptions& options = {});

std::vector<GEIndex> ge_curve(const WeightedSample& sample, std::span<const double> alphas,
                              const ComputeOptions& options = {});

/// Throws StatsError("non-finite") for NaN or infinite alpha.
void check_alpha(double alpha);

}  // namespace informality
