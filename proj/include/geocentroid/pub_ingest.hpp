#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "geocentroid/org_registry.hpp"

namespace geocentroid {

struct AuthorEntry {
  std::optional<std::string> display_name;
  std::vector<std::string> org_ids;  // may contain duplicates on input
};

/// One research output as parsed from the line-delimited input. Citation
/// counts and custom weights are validated to be non-negative.
struct PublicationRecord {
  std::string pub_id;
  int year = 0;
  std::optional<int> month;                              // 1..12
  long long times_cited = 0;                             // defaults to 0
  std::optional<std::map<int, long long>> citations_by_year;
  std::optional<std::map<std::string, double>> custom_weights;
  std::vector<AuthorEntry> authors;
};

struct ParseLimits {
  int year_min = 1400;
  int year_max = 2100;
};

/// Parses one JSON record line. Returns nullopt and fills `error` on a syntax
/// error or an invariant violation; the caller decides whether that skips the
/// record or aborts the run.
std::optional<PublicationRecord> parse_record(std::string_view line,
                                              const ParseLimits& limits,
                                              std::string& error);

/// A publication after registry lookup: one inner list of registry entries
/// per author that resolved to at least one organization. Authors with no
/// resolvable affiliation are dropped and counted. A publication whose
/// resolved_authors is empty contributes nothing downstream.
struct ResolvedPublication {
  std::string pub_id;
  int year = 0;
  std::optional<int> month;
  long long times_cited = 0;
  std::optional<std::map<int, long long>> citations_by_year;
  std::optional<std::map<std::string, double>> custom_weights;
  std::vector<std::vector<const OrgRecord*>> resolved_authors;
  std::size_t dropped_author_count = 0;
  std::size_t dropped_org_ref_count = 0;  // distinct unknown ids dropped
};

/// Per author: deduplicates org_ids (first occurrence wins), looks each up,
/// drops unknown ids and then authors left with zero organizations. Author
/// order is preserved. The registry must outlive the result.
ResolvedPublication resolve_affiliations(const PublicationRecord& record,
                                         const OrgRegistry& registry);

}  // namespace geocentroid
