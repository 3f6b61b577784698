#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "geocentroid/period.hpp"

namespace geocentroid {

/// Recipe for a reproducible synthetic dataset. The same config always
/// produces byte-identical files, across platforms: draws come from a
/// mt19937_64 stream reduced with plain modulo, never through
/// std::*_distribution (whose output is implementation-defined).
struct SynthConfig {
  std::uint64_t seed = 42;
  /// Periods to emit, in order, with an exact record count each. A
  /// zero-count entry leaves no trace in the output.
  std::vector<std::pair<PeriodKey, std::uint64_t>> plan;
  std::size_t org_pool = 100;
  std::uint32_t authors_min = 1;
  std::uint32_t authors_max = 10;
  std::uint32_t orgs_min = 1;  // orgs per author
  std::uint32_t orgs_max = 3;
  std::uint32_t cite_min = 0;
  std::uint32_t cite_max = 100;
  /// Optional coordinate source: a text file with one "latitude,longitude"
  /// pair per line, used in order instead of uniform random coordinates.
  std::optional<std::string> org_list_path;
};

/// Validates the config; returns an explanation for the first violated
/// constraint, or nullopt when the config is usable.
std::optional<std::string> validate_synth_config(const SynthConfig& config);

struct SynthSummary {
  std::uint64_t organizations = 0;
  std::uint64_t publications = 0;
};

/// Writes the organization registry CSV and the publications JSONL honoring
/// the period plan exactly. Throws std::runtime_error on an invalid config or
/// an unwritable target.
SynthSummary generate_synthetic(const SynthConfig& config, const std::string& registry_path,
                                const std::string& pubs_path);

}  // namespace geocentroid
