#include "informality/detail/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <thread>

namespace informality::detail {
namespace {

unsigned resolve_threads(unsigned requested, std::size_t blocks) {
  unsigned t = requested == 0 ? std::max(1u, std::thread::hardware_concurrency()) : requested;
  return static_cast<unsigned>(std::min<std::size_t>(t, std::max<std::size_t>(blocks, 1)));
}

// Runs `body(begin, end, partial)` on every fixed-size block and returns the
// per-block partials in block order. The thread count only changes which
// thread fills which block.
template <typename Partial, typename Body>
std::vector<std::vector<Partial>> run_blocked(std::size_t n, std::size_t slots, unsigned threads,
                                              Body body) {
  const std::size_t blocks = (n + kReductionBlock - 1) / kReductionBlock;
  std::vector<std::vector<Partial>> partials(blocks, std::vector<Partial>(slots));
  const unsigned t = resolve_threads(threads, blocks);
  auto worker = [&](unsigned tid) {
    for (std::size_t b = tid; b < blocks; b += t) {
      const std::size_t begin = b * kReductionBlock;
      const std::size_t end = std::min(n, begin + kReductionBlock);
      body(begin, end, partials[b]);
    }
  };
  if (t <= 1) {
    worker(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(t);
    for (unsigned tid = 0; tid < t; ++tid) pool.emplace_back(worker, tid);
  }
  return partials;
}

inline std::uint32_t group_of(const Columns& c, std::size_t i) {
  return c.groups.empty() ? 0u : c.groups[i];
}

}  // namespace

void validate_columns(const Columns& c) {
  if (c.values.size() != c.weights.size() || (!c.groups.empty() && c.groups.size() != c.values.size()))
    throw StatsError("size-mismatch", "value, weight and group columns differ in length");
  if (c.group_count == 0) throw StatsError("empty-sample", "no groups declared");
  for (std::size_t i = 0; i < c.values.size(); ++i) {
    const double y = c.values[i];
    const double w = c.weights[i];
    if (!std::isfinite(y) || !std::isfinite(w))
      throw StatsError("non-finite", "item " + std::to_string(i) + " is not finite");
    if (y <= 0.0)
      throw StatsError("nonpositive-value", "item " + std::to_string(i) + " has value <= 0");
    if (w < 0.0)
      throw StatsError("negative-weight", "item " + std::to_string(i) + " has weight < 0");
    if (!c.groups.empty() && c.groups[i] >= c.group_count)
      throw StatsError("size-mismatch", "item " + std::to_string(i) + " has an undeclared group");
  }
}

std::vector<SlotMoments> accumulate_moments(const Columns& c, const ComputeOptions& options) {
  const std::size_t slots = c.slot_count();
  const std::size_t pooled = c.group_count;
  auto partials = run_blocked<SlotMoments>(
      c.values.size(), slots, options.threads,
      [&](std::size_t begin, std::size_t end, std::vector<SlotMoments>& out) {
        auto update = [](SlotMoments& m, double y, double w) {
          m.weight.add(w);
          m.weighted_value.add(w * y);
          ++m.count;
          if (w > 0.0) {
            m.min = std::min(m.min, y);
            m.max = std::max(m.max, y);
          }
        };
        for (std::size_t i = begin; i < end; ++i) {
          const double y = c.values[i];
          const double w = c.weights[i];
          update(out[group_of(c, i)], y, w);
          if (c.with_pooled) update(out[pooled], y, w);
        }
      });

  std::vector<SlotMoments> total(slots);
  for (const auto& block : partials) {
    for (std::size_t s = 0; s < slots; ++s) {
      total[s].weight.merge(block[s].weight);
      total[s].weighted_value.merge(block[s].weighted_value);
      total[s].count += block[s].count;
      total[s].min = std::min(total[s].min, block[s].min);
      total[s].max = std::max(total[s].max, block[s].max);
    }
  }
  return total;
}

namespace {

// GE kernel at r = y / mean with its first-order part, alpha * (r - 1), removed.
// That part sums to zero against the slot mean, so dropping it changes no
// index but leaves terms of one sign. Near r = 1 the remainder is O((r-1)^2)
// and is summed as a power series.
double ge_term(GEForm form, double alpha, double y, double mean) {
  const double x = (y - mean) / mean;
  if (std::fabs(x) < 0.05) {
    const double x2 = x * x;
    double sum = 0.0;
    double power = x2;
    double coef = alpha * (alpha - 1.0) / 2.0;
    for (int k = 2; k < 60; ++k, power *= x) {
      double t = 0.0;
      switch (form) {
        case GEForm::MeanLogDeviation:
          t = (k % 2 ? -power : power) / k;
          break;
        case GEForm::Theil:
          t = (k % 2 ? -power : power) / (k * (k - 1.0));
          break;
        case GEForm::General:
          t = coef * power;
          coef *= (alpha - k) / (k + 1.0);
          break;
      }
      sum += t;
      if (std::fabs(t) <= 1e-17 * std::fabs(sum)) break;
    }
    return sum;
  }
  switch (form) {
    case GEForm::MeanLogDeviation:
      return x - std::log1p(x);
    case GEForm::Theil:
      return (1.0 + x) * std::log1p(x) - x;
    case GEForm::General:
      break;
  }
  return std::expm1(alpha * std::log1p(x)) - alpha * x;
}

}  // namespace

std::vector<CompensatedSum> accumulate_ge_terms(const Columns& c, std::span<const double> slot_means,
                                                double alpha, const ComputeOptions& options) {
  const std::size_t slots = c.slot_count();
  const std::size_t pooled = c.group_count;
  const GEForm form = ge_form(alpha);

  auto partials = run_blocked<CompensatedSum>(
      c.values.size(), slots, options.threads,
      [&](std::size_t begin, std::size_t end, std::vector<CompensatedSum>& out) {
        for (std::size_t i = begin; i < end; ++i) {
          const double y = c.values[i];
          const double w = c.weights[i];
          if (w == 0.0) continue;
          const std::uint32_t g = group_of(c, i);
          out[g].add(w * ge_term(form, alpha, y, slot_means[g]));
          if (c.with_pooled) out[pooled].add(w * ge_term(form, alpha, y, slot_means[pooled]));
        }
      });

  std::vector<CompensatedSum> total(slots);
  for (const auto& block : partials)
    for (std::size_t s = 0; s < slots; ++s) total[s].merge(block[s]);
  return total;
}

GEIndex finish_ge(double alpha, double term_sum, double total_weight, bool constant) {
  GEIndex out{alpha, 0.0, false};
  if (constant) return out;
  double v = term_sum / total_weight;
  if (ge_form(alpha) == GEForm::General) v /= alpha * alpha - alpha;
  if (v < 0.0) {
    out.clamped = true;
    v = 0.0;
  }
  out.value = v;
  return out;
}

}  // namespace informality::detail
