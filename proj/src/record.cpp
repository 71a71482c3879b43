#include "informality/record.hpp"

namespace informality {
namespace {

template <typename Enum, std::size_t N>
std::optional<Enum> lookup(std::string_view s, const std::array<std::pair<std::string_view, Enum>, N>& table) {
  for (const auto& [name, value] : table)
    if (name == s) return value;
  return std::nullopt;
}

constexpr std::array<std::pair<std::string_view, Ownership>, 4> kOwnership = {{
    {"ProprietaryOrPartnership", Ownership::ProprietaryOrPartnership},
    {"IncorporatedOrOtherLegal", Ownership::IncorporatedOrOtherLegal},
    {"Household", Ownership::Household},
    {"Unknown", Ownership::Unknown},
}};

constexpr std::array<std::pair<std::string_view, SizeClass>, 3> kSize = {{
    {"LessThanTen", SizeClass::LessThanTen},
    {"TenOrMore", SizeClass::TenOrMore},
    {"Unknown", SizeClass::Unknown},
}};

constexpr std::array<std::pair<std::string_view, JobStatus>, 4> kStatus = {{
    {"RegularWage", JobStatus::RegularWage},
    {"Casual", JobStatus::Casual},
    {"SelfEmployed", JobStatus::SelfEmployed},
    {"Unknown", JobStatus::Unknown},
}};

constexpr std::array<std::pair<std::string_view, SocialSecurity>, 3> kSocialSecurity = {{
    {"Available", SocialSecurity::Available},
    {"NotAvailable", SocialSecurity::NotAvailable},
    {"Unknown", SocialSecurity::Unknown},
}};

}  // namespace

std::string age_group_for(int age) {
  if (age < 15) return "G0";
  if (age < 25) return "G1";
  if (age < 45) return "G2";
  if (age < 65) return "G3";
  return "G4";
}

std::string_view to_string(Ownership v) { return kOwnership[static_cast<std::size_t>(v)].first; }
std::string_view to_string(SizeClass v) { return kSize[static_cast<std::size_t>(v)].first; }
std::string_view to_string(JobStatus v) { return kStatus[static_cast<std::size_t>(v)].first; }
std::string_view to_string(SocialSecurity v) { return kSocialSecurity[static_cast<std::size_t>(v)].first; }

std::optional<Ownership> parse_ownership(std::string_view s) { return lookup(s, kOwnership); }
std::optional<SizeClass> parse_size_class(std::string_view s) { return lookup(s, kSize); }
std::optional<JobStatus> parse_job_status(std::string_view s) { return lookup(s, kStatus); }
std::optional<SocialSecurity> parse_social_security(std::string_view s) {
  return lookup(s, kSocialSecurity);
}

}  // namespace informality
