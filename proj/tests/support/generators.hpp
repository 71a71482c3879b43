#pragma once

// Seeded sample and record generators shared by unit and acceptance tests.

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "informality/decompose.hpp"
#include "informality/record.hpp"
#include "informality/taxonomy.hpp"

namespace testgen {

enum class Shape { LogNormal, Pareto };

inline double draw(std::mt19937_64& rng, Shape shape) {
  if (shape == Shape::LogNormal) {
    std::lognormal_distribution<double> d(7.5, 0.6);
    return d(rng);
  }
  // Pareto with scale 1000 and tail index 2.5 by inversion.
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return 1000.0 / std::pow(1.0 - u(rng), 1.0 / 2.5);
}

inline double draw_weight(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> d(1, 100000);
  return d(rng) / 100.0;
}

inline informality::GroupedSample grouped(std::mt19937_64& rng, std::size_t n, std::size_t groups, Shape shape,
                                          bool unit_weights = false) {
  informality::GroupedSample s;
  s.key = "g";
  for (std::size_t j = 0; j < groups; ++j) s.labels.push_back("g" + std::to_string(j));
  std::uniform_int_distribution<std::uint32_t> pick(0, static_cast<std::uint32_t>(groups - 1));
  s.values.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    // Group-specific scale so that between-group inequality is non-trivial.
    const std::uint32_t g = i < groups ? static_cast<std::uint32_t>(i) : pick(rng);
    s.values.push_back(draw(rng, shape) * (1.0 + 0.5 * g));
    s.weights.push_back(unit_weights ? 1.0 : draw_weight(rng));
    s.groups.push_back(g);
  }
  return s;
}

inline informality::ObservationRecord record(std::mt19937_64& rng, std::size_t id) {
  using namespace informality;
  auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
  ObservationRecord r;
  r.record_id = "R" + std::to_string(id);
  r.weight = std::uniform_int_distribution<int>(0, 5'000'000)(rng) / 100.0;
  r.mpce = std::uniform_int_distribution<int>(1, 10'000'000)(rng) / 100.0;
  r.occupation = std::to_string(1 + pick(9));
  r.industry = std::to_string(1 + pick(21));
  r.sector = std::string(kSectorLabels[pick(2)]);
  r.gender = std::string(kGenderLabels[pick(2)]);
  r.social_group = std::string(kSocialGroupLabels[pick(4)]);
  if (pick(20) != 0) {
    r.age = static_cast<int>(pick(90));
    r.age_group = age_group_for(*r.age);
  }
  r.region = "R" + std::to_string(1 + pick(12));
  r.enterprise.ownership = static_cast<Ownership>(pick(4));
  r.enterprise.size_class = static_cast<SizeClass>(pick(3));
  r.job.status = static_cast<JobStatus>(pick(4));
  r.job.social_security = static_cast<SocialSecurity>(pick(3));
  return r;
}

/// Record whose employment class under the default policy is forced.
inline informality::ObservationRecord forced_record(informality::EmploymentClass c, double weight,
                                                    std::string occupation = "1") {
  using namespace informality;
  ObservationRecord r;
  r.weight = weight;
  r.mpce = 1000.0;
  r.occupation = std::move(occupation);
  r.industry = "3";
  r.sector = "Rural";
  r.gender = "Male";
  r.social_group = "Others";
  if (c == EmploymentClass::Informal) {
    r.enterprise = {Ownership::ProprietaryOrPartnership, SizeClass::LessThanTen};
    r.job = {JobStatus::Casual, SocialSecurity::NotAvailable};
  } else if (c == EmploymentClass::Formal) {
    r.enterprise = {Ownership::IncorporatedOrOtherLegal, SizeClass::TenOrMore};
    r.job = {JobStatus::RegularWage, SocialSecurity::Available};
  } else {
    r.enterprise = {Ownership::Unknown, SizeClass::Unknown};
    r.job = {JobStatus::Unknown, SocialSecurity::Unknown};
  }
  return r;
}

}  // namespace testgen
