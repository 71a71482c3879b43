#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace informality {

enum class Ownership { ProprietaryOrPartnership, IncorporatedOrOtherLegal, Household, Unknown };
enum class SizeClass { LessThanTen, TenOrMore, Unknown };
enum class JobStatus { RegularWage, Casual, SelfEmployed, Unknown };
enum class SocialSecurity { Available, NotAvailable, Unknown };

struct EnterpriseProfile {
  Ownership ownership = Ownership::Unknown;
  SizeClass size_class = SizeClass::Unknown;
  bool operator==(const EnterpriseProfile&) const = default;
};

struct JobProfile {
  JobStatus status = JobStatus::Unknown;
  SocialSecurity social_security = SocialSecurity::Unknown;
  bool operator==(const JobProfile&) const = default;
};

/// One surveyed worker.
struct ObservationRecord {
  std::string record_id;
  /// Survey multiplier: persons represented.
  double weight = 1.0;
  /// Monthly per-capita consumption expenditure.
  double mpce = 0.0;
  std::string occupation;
  std::string industry;
  /// "Rural" or "Urban".
  std::string sector;
  /// "Male" or "Female".
  std::string gender;
  /// "ST", "SC", "OBC" or "Others".
  std::string social_group;
  std::optional<int> age;
  /// Derived from age; see age_group_for.
  std::string age_group;
  std::string region;
  EnterpriseProfile enterprise;
  JobProfile job;

  bool operator==(const ObservationRecord&) const = default;
};

inline constexpr std::array<std::string_view, 2> kSectorLabels = {"Rural", "Urban"};
inline constexpr std::array<std::string_view, 2> kGenderLabels = {"Male", "Female"};
inline constexpr std::array<std::string_view, 4> kSocialGroupLabels = {"ST", "SC", "OBC", "Others"};

/// Working-age band: G0 below 15, G1 15-24, G2 25-44, G3 45-64, G4 65 and over.
std::string age_group_for(int age);

std::string_view to_string(Ownership v);
std::string_view to_string(SizeClass v);
std::string_view to_string(JobStatus v);
std::string_view to_string(SocialSecurity v);

std::optional<Ownership> parse_ownership(std::string_view s);
std::optional<SizeClass> parse_size_class(std::string_view s);
std::optional<JobStatus> parse_job_status(std::string_view s);
std::optional<SocialSecurity> parse_social_security(std::string_view s);

}  // namespace informality
