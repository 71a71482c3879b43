#include "informality/taxonomy.hpp"

#include <fstream>
#include <map>
#include <tuple>

#include "informality/csv.hpp"
#include "informality/detail/text.hpp"

namespace informality {
namespace {

constexpr std::array<std::string_view, 4> kSectorClassNames = {"InformalSector", "FormalSector",
                                                               "HouseholdSector", "Indeterminate"};
constexpr std::array<std::string_view, 3> kEmploymentNames = {"Formal", "Informal", "Indeterminate"};

constexpr std::array<std::string_view, 8> kCategoryNames = {
    "occupation", "industry", "sector", "gender", "social_group", "age_group", "region", "employment_class"};

template <typename Enum, std::size_t N>
std::optional<Enum> by_name(std::string_view s, const std::array<std::string_view, N>& names) {
  for (std::size_t i = 0; i < N; ++i)
    if (names[i] == s) return static_cast<Enum>(i);
  return std::nullopt;
}

constexpr std::array<SectorClass, 4> kAllSectors = {SectorClass::InformalSector, SectorClass::FormalSector,
                                                    SectorClass::HouseholdSector, SectorClass::Indeterminate};
constexpr std::array<JobStatus, 4> kAllStatus = {JobStatus::RegularWage, JobStatus::Casual,
                                                 JobStatus::SelfEmployed, JobStatus::Unknown};
constexpr std::array<SocialSecurity, 3> kAllSocialSecurity = {
    SocialSecurity::Available, SocialSecurity::NotAvailable, SocialSecurity::Unknown};

}  // namespace

std::string_view to_string(SectorClass v) { return kSectorClassNames[static_cast<std::size_t>(v)]; }
std::string_view to_string(EmploymentClass v) { return kEmploymentNames[static_cast<std::size_t>(v)]; }
std::optional<SectorClass> parse_sector_class(std::string_view s) {
  return by_name<SectorClass>(s, kSectorClassNames);
}
std::optional<EmploymentClass> parse_employment_class(std::string_view s) {
  return by_name<EmploymentClass>(s, kEmploymentNames);
}

SectorClass classify_enterprise(const EnterpriseProfile& e) {
  switch (e.ownership) {
    case Ownership::Household:
      return SectorClass::HouseholdSector;
    case Ownership::IncorporatedOrOtherLegal:
      return SectorClass::FormalSector;
    case Ownership::ProprietaryOrPartnership:
      switch (e.size_class) {
        case SizeClass::LessThanTen:
          return SectorClass::InformalSector;
        case SizeClass::TenOrMore:
          return SectorClass::FormalSector;
        case SizeClass::Unknown:
          return SectorClass::Indeterminate;
      }
      break;
    case Ownership::Unknown:
      break;
  }
  return SectorClass::Indeterminate;
}

EmploymentClass classify_worker(SectorClass sector, const JobProfile& job) {
  const auto ss = job.social_security;
  switch (sector) {
    case SectorClass::InformalSector:
    case SectorClass::HouseholdSector:
      switch (job.status) {
        case JobStatus::RegularWage:
          if (ss == SocialSecurity::Available) return EmploymentClass::Formal;
          if (ss == SocialSecurity::NotAvailable) return EmploymentClass::Informal;
          return EmploymentClass::Indeterminate;
        case JobStatus::Casual:
        case JobStatus::SelfEmployed:
          return EmploymentClass::Informal;
        case JobStatus::Unknown:
          // Only a regular worker with social security escapes informality.
          return ss == SocialSecurity::NotAvailable ? EmploymentClass::Informal
                                                    : EmploymentClass::Indeterminate;
      }
      break;
    case SectorClass::FormalSector:
      if (ss == SocialSecurity::NotAvailable) return EmploymentClass::Informal;
      if (ss == SocialSecurity::Available) return EmploymentClass::Formal;
      return EmploymentClass::Indeterminate;
    case SectorClass::Indeterminate:
      break;
  }
  return EmploymentClass::Indeterminate;
}

std::size_t ClassificationPolicy::cell(SectorClass sector, JobStatus status, SocialSecurity ss) {
  return (static_cast<std::size_t>(sector) * 4 + static_cast<std::size_t>(status)) * 3 +
         static_cast<std::size_t>(ss);
}

ClassificationPolicy::ClassificationPolicy() {
  for (auto s : kAllSectors)
    for (auto st : kAllStatus)
      for (auto ss : kAllSocialSecurity) table_[cell(s, st, ss)] = classify_worker(s, JobProfile{st, ss});
}

EmploymentClass ClassificationPolicy::classify(SectorClass sector, const JobProfile& job) const {
  return table_[cell(sector, job.status, job.social_security)];
}

void ClassificationPolicy::set(SectorClass sector, JobStatus status, SocialSecurity ss, EmploymentClass value) {
  table_[cell(sector, status, ss)] = value;
  ++overrides_;
}

ClassificationPolicy ClassificationPolicy::parse(std::istream& in) {
  CsvReader reader(in);
  CsvRecord rec;
  const std::vector<std::string> header = {"sector_class", "job_status", "social_security",
                                           "employment_class"};
  bool have_header = false;
  ClassificationPolicy policy;
  std::map<std::size_t, EmploymentClass> exact;
  while (reader.next(rec)) {
    if (rec.fields.size() == 1 && detail::trim(rec.fields[0]).empty()) continue;
    if (detail::trim(rec.fields[0]).starts_with("#")) continue;
    std::vector<std::string> f;
    for (const auto& x : rec.fields) f.emplace_back(detail::trim(x));
    const std::string where = "policy line " + std::to_string(rec.line) + ": ";
    if (!have_header) {
      if (f != header)
        throw PolicyError(where + "header must be sector_class,job_status,social_security,employment_class");
      have_header = true;
      continue;
    }
    if (f.size() != 4) throw PolicyError(where + "expected 4 columns");

    std::vector<SectorClass> sectors;
    std::vector<JobStatus> statuses;
    std::vector<SocialSecurity> securities;
    if (f[0] == "*") {
      sectors.assign(kAllSectors.begin(), kAllSectors.end());
    } else if (auto v = parse_sector_class(f[0])) {
      sectors.push_back(*v);
    } else {
      throw PolicyError(where + "unknown sector class '" + f[0] + "'");
    }
    if (f[1] == "*") {
      statuses.assign(kAllStatus.begin(), kAllStatus.end());
    } else if (auto v = parse_job_status(f[1])) {
      statuses.push_back(*v);
    } else {
      throw PolicyError(where + "unknown job status '" + f[1] + "'");
    }
    if (f[2] == "*") {
      securities.assign(kAllSocialSecurity.begin(), kAllSocialSecurity.end());
    } else if (auto v = parse_social_security(f[2])) {
      securities.push_back(*v);
    } else {
      throw PolicyError(where + "unknown social security value '" + f[2] + "'");
    }
    const auto value = parse_employment_class(f[3]);
    if (!value) throw PolicyError(where + "unknown employment class '" + f[3] + "'");

    const bool is_exact = sectors.size() == 1 && statuses.size() == 1 && securities.size() == 1;
    for (auto s : sectors)
      for (auto st : statuses)
        for (auto ss : securities) {
          if (is_exact) {
            auto [it, inserted] = exact.emplace(cell(s, st, ss), *value);
            if (!inserted && it->second != *value) throw PolicyError(where + "conflicts with an earlier row");
          }
          policy.set(s, st, ss, *value);
        }
  }
  if (!have_header) throw PolicyError("policy file is empty");
  return policy;
}

ClassificationPolicy ClassificationPolicy::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw PolicyError("cannot open policy file " + path.string());
  return parse(in);
}

double ClassTally::total_weight() const noexcept { return weights[0] + weights[1] + weights[2]; }

double ClassTally::share(EmploymentClass c) const noexcept {
  const double total = total_weight();
  return total > 0.0 ? weight(c) / total : 0.0;
}

ClassifiedRecord classify_record(ObservationRecord record, const ClassificationPolicy& policy,
                                 IndeterminatePolicy indeterminate) {
  ClassifiedRecord out;
  out.sector = classify_enterprise(record.enterprise);
  out.employment = policy.classify(out.sector, record.job);
  if (out.employment == EmploymentClass::Indeterminate && indeterminate == IndeterminatePolicy::Informal) {
    out.employment = EmploymentClass::Informal;
    out.reassigned = true;
  }
  out.record = std::move(record);
  return out;
}

ClassifiedDataset classify_dataset(std::vector<ObservationRecord> records, const ClassificationPolicy& policy,
                                   IndeterminatePolicy indeterminate) {
  ClassifiedDataset out;
  out.records.reserve(records.size());
  for (auto& r : records) {
    auto c = classify_record(std::move(r), policy, indeterminate);
    const auto k = static_cast<std::size_t>(c.employment);
    ++out.tally.counts[k];
    out.tally.weights[k] += c.record.weight;
    if (c.reassigned) {
      ++out.tally.reassigned_count;
      out.tally.reassigned_weight += c.record.weight;
    }
    out.records.push_back(std::move(c));
  }
  return out;
}

std::optional<Category> parse_category(std::string_view name) { return by_name<Category>(name, kCategoryNames); }

std::string_view category_name(Category c) { return kCategoryNames[static_cast<std::size_t>(c)]; }

std::string category_value(const ClassifiedRecord& r, Category c) {
  switch (c) {
    case Category::Occupation:
      return r.record.occupation;
    case Category::Industry:
      return r.record.industry;
    case Category::Sector:
      return r.record.sector;
    case Category::Gender:
      return r.record.gender;
    case Category::SocialGroup:
      return r.record.social_group;
    case Category::AgeGroup:
      return r.record.age_group;
    case Category::Region:
      return r.record.region;
    case Category::EmploymentClass:
      return std::string(to_string(r.employment));
  }
  return {};
}

}  // namespace informality
