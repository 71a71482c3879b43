#include "informality/stats.hpp"

#include <cmath>

#include "informality/detail/reduction.hpp"

namespace informality {

StatsError::StatsError(std::string code, const std::string& detail)
    : std::runtime_error(code + ": " + detail), code_(std::move(code)) {}

void check_alpha(double alpha) {
  if (!std::isfinite(alpha)) throw StatsError("non-finite", "alpha must be finite");
}

GEForm ge_form(double alpha) {
  if (std::fabs(alpha) <= kLimitEpsilon) return GEForm::MeanLogDeviation;
  if (std::fabs(alpha - 1.0) <= kLimitEpsilon) return GEForm::Theil;
  return GEForm::General;
}

WeightedSample::WeightedSample(std::vector<double> values, std::vector<double> weights)
    : values_(std::move(values)), weights_(std::move(weights)) {
  detail::Columns columns{values_, weights_, {}, 1, false};
  detail::validate_columns(columns);
  CompensatedSum total;
  for (double w : weights_) total.add(w);
  total_weight_ = total.value();
  if (!(total_weight_ > 0.0)) throw StatsError("empty-sample", "total weight is zero");
}

WeightedSample WeightedSample::unweighted(std::vector<double> values) {
  std::vector<double> weights(values.size(), 1.0);
  return WeightedSample(std::move(values), std::move(weights));
}

namespace {

detail::Columns columns_of(const WeightedSample& s) {
  return detail::Columns{s.values(), s.weights(), {}, 1, false};
}

}  // namespace

double weighted_mean(const WeightedSample& sample, const ComputeOptions& options) {
  const auto moments = detail::accumulate_moments(columns_of(sample), options);
  return moments[0].mean();
}

GEIndex ge_index(const WeightedSample& sample, double alpha, const ComputeOptions& options) {
  check_alpha(alpha);
  const auto columns = columns_of(sample);
  const auto moments = detail::accumulate_moments(columns, options);
  const double mean = moments[0].mean();
  if (!(mean > 0.0)) throw StatsError("nonpositive-value", "weighted mean is not positive");
  const auto terms = detail::accumulate_ge_terms(columns, std::span<const double>(&mean, 1), alpha, options);
  return detail::finish_ge(alpha, terms[0].value(), moments[0].weight.value(), moments[0].constant());
}

std::vector<GEIndex> ge_curve(const WeightedSample& sample, std::span<const double> alphas,
                              const ComputeOptions& options) {
  std::vector<GEIndex> out;
  out.reserve(alphas.size());
  for (double a : alphas) out.push_back(ge_index(sample, a, options));
  return out;
}

}  // namespace informality
