#pragma once

// JSON and CSV emitters. JSON keeps full precision; CSV tables round indices
// and shares to 3 decimals and percentages to 2.

#include <istream>
#include <json.hpp>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "informality/decompose.hpp"
#include "informality/ingest.hpp"
#include "informality/published_table.hpp"
#include "informality/tabulate.hpp"
#include "informality/taxonomy.hpp"

namespace informality {

nlohmann::json to_json(const GEIndex& index);
nlohmann::json to_json(const IngestReport& report);
nlohmann::json to_json(const RecordError& error);
nlohmann::json to_json(const ClassTally& tally);
nlohmann::json to_json(const ObservationRecord& record);
nlohmann::json to_json(const ClassifiedRecord& record);
nlohmann::json to_json(const GroupPartition& partition);
nlohmann::json to_json(const DecompositionResult& result);
nlohmann::json to_json(const NestedDecompositionResult& result);
nlohmann::json to_json(const ShareTable& table);
nlohmann::json to_json(const CrossTab& table);
nlohmann::json to_json(const ValidationReport& report);

/// Columns: level,row,C_w,GEI,P,R,W/B,Index,C_t_pct.
void write_csv(std::ostream& out, const DecompositionResult& result);
/// Outer block followed by one block per outer group, percentages against
/// the grand total.
void write_csv(std::ostream& out, const NestedDecompositionResult& result);
void write_csv(std::ostream& out, const ShareTable& table);
void write_csv(std::ostream& out, const CrossTab& table);
void write_csv(std::ostream& out, const ValidationReport& report);
void write_errors_csv(std::ostream& out, std::span<const ReadResult> results);

/// Normalised record CSV / JSON lines, one row per record.
void write_records_csv(std::ostream& out, std::span<const ObservationRecord> records);
void write_records_jsonl(std::ostream& out, std::span<const ObservationRecord> records);
/// As write_records_csv plus sector_class and employment_class columns.
void write_classified_csv(std::ostream& out, std::span<const ClassifiedRecord> records);
void write_classified_jsonl(std::ostream& out, std::span<const ClassifiedRecord> records);
/// Reads write_classified_csv output back. Throws FixtureError on schema
/// problems.
std::vector<ClassifiedRecord> read_classified_csv(std::istream& in);

/// Shortest round-trip decimal text.
std::string format_double(double v);

}  // namespace informality
