#pragma once

#include <filesystem>
#include <istream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "informality/stats.hpp"

namespace informality {

class FixtureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One row of a published decomposition table.
///
/// `level` is "outer" for the top-level split or the label of an outer group
/// for that group's inner block. Labels "I", "I_w" and "I_b" are summary rows:
/// their GEI column holds the index (I) or the within/between value (I_w,
/// I_b), and C_t holds the published percentage. Any other label is a group
/// row with P, R, GEI and the published C_w and C_t.
struct PublishedRow {
  std::string level;
  std::string label;
  std::optional<double> P;
  std::optional<double> R;
  std::optional<double> GEI;
  std::optional<double> C_w;
  std::optional<double> C_t;
};

struct PublishedTable {
  std::vector<PublishedRow> rows;
};

/// CSV with header level,label,P,R,GEI,C_w_published,C_t_published. Empty
/// cells and "-" are missing values. Throws FixtureError.
PublishedTable parse_published_table(std::istream& in);
PublishedTable load_published_table(const std::filesystem::path& path);

struct ValidationTolerances {
  /// Absolute, on C_w and on within/between index values.
  double contribution = 0.001;
  /// Percentage points, on every C_t cell.
  double percent = 0.15;
  /// Absolute, when two published index values should coincide.
  double index = 0.0015;
  /// Absolute, on sums of published P or R.
  double share_sum = 0.005;
};

struct CellCheck {
  std::string level;
  std::string label;
  /// "C_w", "C_t", "I_w", "I_b", "share_within", "share_between".
  std::string quantity;
  double recomputed = 0.0;
  double published = 0.0;
  double deviation = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct IdentityCheck {
  std::string level;
  std::string name;
  double value = 0.0;
  double expected = 0.0;
  double deviation = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct Discrepancy {
  std::string level;
  std::string description;
  double first = 0.0;
  double second = 0.0;
};

struct RecomputedGroup {
  std::string level;
  std::string label;
  double W = 0.0;
  double C_w = 0.0;
  double C_t_percent = 0.0;
};

struct ValidationReport {
  double alpha = kDefaultAlpha;
  std::vector<RecomputedGroup> groups;
  std::vector<CellCheck> cells;
  std::vector<IdentityCheck> identities;
  std::vector<Discrepancy> discrepancies;
  double max_cw_deviation = 0.0;
  double max_ct_deviation = 0.0;
  double max_index_deviation = 0.0;
  /// Every C_w, C_t, I_w, I_b and share cell is within tolerance.
  bool contributions_ok = true;
};

/// Recomputes W, C_w and C_t from published (P, R, GEI) and compares with the
/// published contributions. Inner blocks use the outer row's GEI as the group
/// index; an inner "I" header that disagrees with it is reported as a
/// discrepancy rather than resolved.
ValidationReport validate_published_table(const PublishedTable& table, double alpha,
                                          const ValidationTolerances& tolerances = {});

}  // namespace informality
