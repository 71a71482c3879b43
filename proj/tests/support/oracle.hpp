#pragma once

// Direct evaluation of the GE and subgroup decomposition formulas. Plain
// loops in long double, pow() only, no blocking or compensation; kept apart
// from the library so tests compare two independent routes.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace oracle {

struct Item {
  double value;
  double weight;
  std::uint32_t group;
};

inline long double mean(const std::vector<Item>& items, long double* total_weight = nullptr) {
  long double w = 0, wy = 0;
  for (const auto& it : items) {
    w += it.weight;
    wy += static_cast<long double>(it.weight) * it.value;
  }
  if (total_weight) *total_weight = w;
  return wy / w;
}

inline long double ge(const std::vector<Item>& items, long double alpha) {
  long double w = 0;
  const long double mu = mean(items, &w);
  long double acc = 0;
  if (std::fabs(static_cast<double>(alpha)) <= 1e-9) {
    for (const auto& it : items) acc += it.weight * std::log(mu / it.value);
    return acc / w;
  }
  if (std::fabs(static_cast<double>(alpha - 1)) <= 1e-9) {
    for (const auto& it : items) {
      const long double r = it.value / mu;
      acc += it.weight * r * std::log(r);
    }
    return acc / w;
  }
  for (const auto& it : items) acc += it.weight * std::pow(it.value / mu, alpha);
  return (acc / w - 1) / (alpha * alpha - alpha);
}

struct GroupResult {
  long double P = 0, R = 0, W = 0, W_mean_form = 0, index = 0, C_w = 0, C_t = 0;
};

struct Result {
  long double total = 0, within = 0, between = 0, share_within = 0, share_between = 0;
  std::vector<GroupResult> groups;
};

inline Result decompose(const std::vector<Item>& items, std::size_t group_count, long double alpha) {
  Result r;
  long double W_total = 0;
  const long double mu = mean(items, &W_total);
  r.total = ge(items, alpha);
  for (std::size_t j = 0; j < group_count; ++j) {
    std::vector<Item> sub;
    for (const auto& it : items)
      if (it.group == j) sub.push_back(it);
    GroupResult g;
    long double wj = 0;
    for (const auto& it : sub) wj += it.weight;
    if (wj > 0) {
      const long double mu_j = mean(sub);
      g.P = wj / W_total;
      g.R = g.P * mu_j / mu;
      g.W = std::pow(g.R, alpha) * std::pow(g.P, 1 - alpha);
      g.W_mean_form = g.P * std::pow(mu_j / mu, alpha);
      bool constant = true;
      for (const auto& it : sub)
        if (it.weight > 0 && it.value != sub.front().value) constant = false;
      g.index = constant ? 0 : ge(sub, alpha);
      g.C_w = g.W * g.index;
    }
    r.within += g.C_w;
    r.groups.push_back(g);
  }
  r.between = r.total - r.within;
  for (auto& g : r.groups) g.C_t = 100 * g.C_w / r.total;
  r.share_within = 100 * r.within / r.total;
  r.share_between = 100 * r.between / r.total;
  return r;
}

}  // namespace oracle
