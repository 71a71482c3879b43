#include <gtest/gtest.h>

#include <sstream>

#include "informality/published_table.hpp"

using namespace informality;

namespace {

const std::string kFixture = std::string(INFORMALITY_DATA_DIR) + "/fixtures/table1_nsso68.csv";

const RecomputedGroup& group(const ValidationReport& r, const std::string& level, const std::string& label) {
  for (const auto& g : r.groups)
    if (g.level == level && g.label == label) return g;
  throw std::runtime_error("no group " + level + "/" + label);
}

double leaf_sum(const ValidationReport& r, const std::string& level, double RecomputedGroup::*field) {
  double s = 0;
  for (const auto& g : r.groups)
    if (g.level == level) s += g.*field;
  return s;
}

}  // namespace

TEST(PublishedTable, ParsesBundledFixture) {
  const auto t = load_published_table(kFixture);
  EXPECT_EQ(t.rows.size(), 29u);
  EXPECT_EQ(t.rows[0].label, "I");
  EXPECT_FALSE(t.rows[0].P.has_value());
  EXPECT_DOUBLE_EQ(*t.rows[0].GEI, 0.282);
}

TEST(PublishedTable, RejectsMalformedFixtures) {
  std::istringstream bad_header("level,label,P\nouter,I,,\n");
  EXPECT_THROW(parse_published_table(bad_header), FixtureError);
  std::istringstream bad_number(
      "level,label,P,R,GEI,C_w_published,C_t_published\nouter,Formal,x,0.1,0.2,0.3,4\n");
  EXPECT_THROW(parse_published_table(bad_number), FixtureError);
  std::istringstream short_row("level,label,P,R,GEI,C_w_published,C_t_published\nouter,Formal,0.1\n");
  EXPECT_THROW(parse_published_table(short_row), FixtureError);
  std::istringstream no_outer(
      "level,label,P,R,GEI,C_w_published,C_t_published\nFormal,1,0.5,0.5,0.2,0.1,1\n");
  EXPECT_THROW(validate_published_table(parse_published_table(no_outer), 1.3), FixtureError);
}

TEST(PublishedTable, OuterRowsReplay) {
  const auto r = validate_published_table(load_published_table(kFixture), 1.3);
  const auto& f = group(r, "outer", "Formal");
  EXPECT_NEAR(f.W, 0.205, 5e-4);
  EXPECT_NEAR(f.C_w, 0.056, 0.001);
  EXPECT_NEAR(f.C_t_percent, 20.0, 0.15);
  const auto& i = group(r, "outer", "Informal");
  EXPECT_NEAR(i.C_w, 0.184, 0.001);
}

TEST(PublishedTable, EveryContributionWithinTolerance) {
  const auto r = validate_published_table(load_published_table(kFixture), 1.3);
  EXPECT_TRUE(r.contributions_ok);
  EXPECT_LE(r.max_cw_deviation, 0.001);
  EXPECT_LE(r.max_ct_deviation, 0.15);
  for (const auto& c : r.cells) EXPECT_TRUE(c.pass) << c.level << "/" << c.label << " " << c.quantity;
  EXPECT_NEAR(leaf_sum(r, "Formal", &RecomputedGroup::C_t_percent), 16.65, 0.15);
  EXPECT_NEAR(leaf_sum(r, "Informal", &RecomputedGroup::C_t_percent), 55.68, 0.15);
  EXPECT_NEAR(leaf_sum(r, "Formal", &RecomputedGroup::C_w), 0.229, 0.005);
}

TEST(PublishedTable, InformalIndexDiscrepancyReported) {
  const auto r = validate_published_table(load_published_table(kFixture), 1.3);
  ASSERT_EQ(r.discrepancies.size(), 1u);
  EXPECT_EQ(r.discrepancies[0].level, "Informal");
  EXPECT_DOUBLE_EQ(r.discrepancies[0].first, 0.227);
  EXPECT_DOUBLE_EQ(r.discrepancies[0].second, 0.223);
}

TEST(PublishedTable, PublishedSharesAddUp) {
  const auto r = validate_published_table(load_published_table(kFixture), 1.3);
  bool seen = false;
  for (const auto& id : r.identities) {
    if (id.name == "published within% + between% = 100") {
      seen = true;
      EXPECT_NEAR(id.value, 100.0, 1e-9);
      EXPECT_TRUE(id.pass);
    }
  }
  EXPECT_TRUE(seen);
}

TEST(PublishedTable, PerturbedCellFails) {
  auto t = load_published_table(kFixture);
  for (auto& row : t.rows)
    if (row.level == "Formal" && row.label == "4 Clerks") row.C_w = 0.035;
  const auto r = validate_published_table(t, 1.3);
  EXPECT_FALSE(r.contributions_ok);
  EXPECT_GT(r.max_cw_deviation, 0.009);
}
