#pragma once

#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "informality/record.hpp"

namespace informality::cli {

enum ExitCode : int {
  kOk = 0,
  kUnexpected = 1,
  kConfigError = 2,
  kParseError = 3,
  kDegenerate = 4,
  kValidationFailed = 5,
};

/// Runs one command. `args` holds the full command line, program name first.
/// Human-readable progress goes to `out`, diagnostics to `err`; artifacts are
/// written under the output directory.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

/// Seeded synthetic worker records with plausible attribute mixes. Weights and
/// MPCE carry two decimals so they survive an implied-decimal layout exactly.
std::vector<ObservationRecord> synthetic_records(std::size_t count, std::uint64_t seed);

}  // namespace informality::cli
