#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <istream>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "informality/record.hpp"

namespace informality {

enum class SectorClass { InformalSector, FormalSector, HouseholdSector, Indeterminate };
enum class EmploymentClass { Formal, Informal, Indeterminate };

std::string_view to_string(SectorClass v);
std::string_view to_string(EmploymentClass v);
std::optional<SectorClass> parse_sector_class(std::string_view s);
std::optional<EmploymentClass> parse_employment_class(std::string_view s);

/// Informal sector: proprietary or partnership enterprises with fewer than
/// ten workers. Households form their own sector; incorporated and other
/// legal entities, and proprietary/partnership units of ten or more, are
/// formal. Unknown inputs the rule needs give Indeterminate.
SectorClass classify_enterprise(const EnterpriseProfile& enterprise);

/// Informal employment under the default decision table:
///  - informal sector or household: Informal, except regular wage workers
///    with employer social security, who are Formal;
///  - formal sector: Formal, except workers without social security, who are
///    Informal;
///  - an Indeterminate sector, or an Unknown job field the rule needs, gives
///    Indeterminate.
EmploymentClass classify_worker(SectorClass sector, const JobProfile& job);

class PolicyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Full SectorClass x JobStatus x SocialSecurity decision table (48 cells),
/// initialised from classify_worker and optionally overridden cell by cell.
class ClassificationPolicy {
 public:
  static constexpr std::size_t kCells = 4 * 4 * 3;

  ClassificationPolicy();

  EmploymentClass classify(SectorClass sector, const JobProfile& job) const;
  void set(SectorClass sector, JobStatus status, SocialSecurity social_security, EmploymentClass value);
  std::size_t override_count() const noexcept { return overrides_; }

  /// CSV with header sector_class,job_status,social_security,employment_class.
  /// "*" in the first three columns matches every value. Later rows win over
  /// earlier wildcard rows; two exact rows for the same cell must agree.
  static ClassificationPolicy parse(std::istream& in);
  static ClassificationPolicy load(const std::filesystem::path& path);

 private:
  static std::size_t cell(SectorClass sector, JobStatus status, SocialSecurity social_security);
  std::array<EmploymentClass, kCells> table_{};
  std::size_t overrides_ = 0;
};

/// How Indeterminate workers are carried into downstream statistics.
enum class IndeterminatePolicy {
  /// Kept as Indeterminate; tables and decompositions leave them out and
  /// report their weighted share.
  Exclude,
  /// Reassigned to Informal.
  Informal,
};

struct ClassifiedRecord {
  ObservationRecord record;
  SectorClass sector = SectorClass::Indeterminate;
  EmploymentClass employment = EmploymentClass::Indeterminate;
  /// Originally Indeterminate, reassigned by IndeterminatePolicy::Informal.
  bool reassigned = false;
};

struct ClassTally {
  std::array<std::size_t, 3> counts{};
  std::array<double, 3> weights{};
  std::size_t reassigned_count = 0;
  double reassigned_weight = 0.0;

  std::size_t total_count() const noexcept { return counts[0] + counts[1] + counts[2]; }
  double total_weight() const noexcept;
  std::size_t count(EmploymentClass c) const noexcept { return counts[static_cast<std::size_t>(c)]; }
  double weight(EmploymentClass c) const noexcept { return weights[static_cast<std::size_t>(c)]; }
  /// Weighted share of class c among all records; 0 for an empty tally.
  double share(EmploymentClass c) const noexcept;
};

struct ClassifiedDataset {
  std::vector<ClassifiedRecord> records;
  ClassTally tally;
};

ClassifiedRecord classify_record(ObservationRecord record, const ClassificationPolicy& policy,
                                 IndeterminatePolicy indeterminate = IndeterminatePolicy::Exclude);

/// Element-wise classification, order preserved, with a class tally.
ClassifiedDataset classify_dataset(std::vector<ObservationRecord> records,
                                   const ClassificationPolicy& policy = ClassificationPolicy(),
                                   IndeterminatePolicy indeterminate = IndeterminatePolicy::Exclude);

/// Categorical keys usable for tables and decompositions.
enum class Category { Occupation, Industry, Sector, Gender, SocialGroup, AgeGroup, Region, EmploymentClass };

std::optional<Category> parse_category(std::string_view name);
std::string_view category_name(Category c);
std::string category_value(const ClassifiedRecord& r, Category c);

}  // namespace informality
