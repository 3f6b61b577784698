#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "geocentroid/centroid.hpp"
#include "geocentroid/line_reader.hpp"
#include "geocentroid/org_registry.hpp"
#include "geocentroid/period.hpp"
#include "geocentroid/pub_ingest.hpp"
#include "geocentroid/weighting.hpp"

namespace geocentroid {

/// Finalized period result. Only periods with positive total weight become
/// points; robust states whether the contributing-record count reached the
/// configured stability threshold.
struct TrajectoryPoint {
  PeriodKey period;
  double latitude = 0.0;
  double longitude = 0.0;
  std::uint64_t n_pubs = 0;
  double total_weight = 0.0;
  bool robust = false;
};

/// Per-period record counts: total = contributing + skipped, where a record
/// contributes when at least one of its authors resolved against the
/// registry.
struct PeriodStats {
  PeriodKey period;
  std::uint64_t n_records_total = 0;
  std::uint64_t n_records_contributing = 0;
  std::uint64_t n_records_skipped = 0;
};

/// The record's time bucket, or nullopt when month granularity is requested
/// and the record carries no month (the record is then excluded and counted).
std::optional<PeriodKey> period_key(const PublicationRecord& record, Granularity granularity);

struct Diagnostic {
  std::size_t line = 0;
  std::string message;
};

struct RunCounters {
  std::uint64_t records_read = 0;      // non-blank input lines
  std::uint64_t parse_errors = 0;
  std::uint64_t undated = 0;           // no month under month granularity
  std::uint64_t filtered_out = 0;      // outside the [from, to] window
  std::uint64_t unresolvable = 0;      // no author resolved
  std::uint64_t zero_weight = 0;       // resolved but weighed 0 under the scheme
  std::uint64_t missing_weight_input = 0;
  std::uint64_t degenerate_spherical = 0;
  std::uint64_t contributing = 0;      // added positive weight to a period
  std::uint64_t dropped_authors = 0;
  std::uint64_t dropped_org_refs = 0;
  std::uint64_t diagnostics_suppressed = 0;
};

struct TrajectoryConfig {
  WeightScheme scheme;
  CentroidMode mode = CentroidMode::planar;
  Granularity granularity = Granularity::year;
  std::uint64_t min_records = 1000;  // robustness threshold, deliberately prominent
  std::optional<PeriodKey> from;     // inclusive
  std::optional<PeriodKey> to;       // inclusive
  unsigned threads = 1;              // 1 = sequential, bit-stable accumulation
  bool strict = false;               // first diagnostic aborts the run
  ParseLimits limits;
  std::size_t max_diagnostics = 1000;  // retained for reporting; counters stay exact
};

struct TrajectoryResult {
  std::vector<TrajectoryPoint> points;  // chronological, positive weight only
  std::vector<PeriodStats> stats;       // every period encountered
  RunCounters counters;
  std::vector<Diagnostic> diagnostics;  // sorted by line
  bool aborted = false;                 // strict mode hit an error
};

/// Single pass over the record stream: parse, resolve, weigh, accumulate per
/// period, finalize. Throws std::runtime_error only for unreadable input;
/// malformed records become diagnostics (or abort the pass in strict mode).
TrajectoryResult build_trajectory(LineReader& pubs, const OrgRegistry& registry,
                                  const TrajectoryConfig& config);

/// Same pass without any centroid computation: per-period counts of records
/// with at least one resolvable affiliation versus skipped ones. scheme and
/// mode in `config` are ignored.
TrajectoryResult period_counts(LineReader& pubs, const OrgRegistry& registry,
                               const TrajectoryConfig& config);

}  // namespace geocentroid
