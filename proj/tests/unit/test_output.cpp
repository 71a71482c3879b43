#include <gtest/gtest.h>

#include <cstdio>
#include <random>
#include <sstream>

#include "informality/csv.hpp"
#include "informality/output.hpp"
#include "support/generators.hpp"

using namespace informality;

namespace {

DecompositionResult small_result() {
  const std::vector<std::string> labels = {"a", "a", "b", "b"};
  return decompose(GroupedSample::from_labels("k", {1, 2, 3, 7}, {1, 1, 1, 1}, labels), 1.3);
}

std::string fixed3(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

}  // namespace

TEST(Output, DecompositionJsonKeepsFullPrecision) {
  const auto r = small_result();
  const auto j = nlohmann::json::parse(to_json(r).dump());
  EXPECT_EQ(j["total"]["value"].get<double>(), r.total.value);
  EXPECT_EQ(j["rows"][1]["C_w"].get<double>(), r.rows[1].C_w);
  EXPECT_EQ(j["within"].get<double>(), r.within);
  EXPECT_EQ(j["rows"].size(), 2u);
}

TEST(Output, DecompositionCsvRounding) {
  const auto r = small_result();
  std::ostringstream out;
  write_csv(out, r);
  std::istringstream in(out.str());
  CsvReader reader(in);
  CsvRecord rec;
  ASSERT_TRUE(reader.next(rec));
  EXPECT_EQ(rec.fields,
            (std::vector<std::string>{"level", "row", "C_w", "GEI", "P", "R", "W", "W/B", "Index", "C_t_pct"}));
  ASSERT_TRUE(reader.next(rec));
  EXPECT_EQ(rec.fields[1], "I");
  EXPECT_EQ(rec.fields[8], fixed3(r.total.value));
  EXPECT_EQ(rec.fields[9], "100.00");
  std::size_t rows = 1;
  while (reader.next(rec)) ++rows;
  EXPECT_EQ(rows, 5u);
}

TEST(Output, ClassifiedCsvRoundTrip) {
  std::mt19937_64 rng(1);
  std::vector<ObservationRecord> raw;
  for (int i = 0; i < 500; ++i) raw.push_back(testgen::record(rng, i));
  raw[3].region = "North, \"hill\" districts";
  const auto classified = classify_dataset(raw).records;
  std::stringstream buf;
  write_classified_csv(buf, classified);
  const auto back = read_classified_csv(buf);
  ASSERT_EQ(back.size(), classified.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    EXPECT_EQ(back[i].record, classified[i].record);
    EXPECT_EQ(back[i].employment, classified[i].employment);
    EXPECT_EQ(back[i].sector, classified[i].sector);
  }
}

TEST(Output, ClassifiedCsvSchemaChecked) {
  std::istringstream bad("record_id,weight\n1,2\n");
  EXPECT_THROW(read_classified_csv(bad), FixtureError);
}

TEST(Output, FormatDoubleRoundTrips) {
  for (double v : {0.1, 123.45, 1e-300, 2.0 / 3.0})
    EXPECT_EQ(std::stod(format_double(v)), v);
}
