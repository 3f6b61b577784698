#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "geocentroid/pub_ingest.hpp"

namespace geocentroid {

enum class WeightSchemeKind {
  unweighted,        // every publication weighs 1
  citations,         // all-time citation count
  citations_window,  // citations within the first N years from publication
  custom_field,      // a named entry of the record's weights map
};

struct WeightScheme {
  WeightSchemeKind kind = WeightSchemeKind::unweighted;
  int window_years = 0;    // >= 1 when kind == citations_window
  std::string field_name;  // when kind == custom_field

  /// Accepts "unweighted", "citations", "citations-window:N" (N >= 1) and
  /// "custom:NAME". Returns nullopt for anything else.
  static std::optional<WeightScheme> parse(std::string_view spec);
  std::string to_string() const;
};

/// Accumulated fraction of one publication attributed to one organization.
/// Summed over a publication the weights total 1.
struct ContributionWeight {
  const OrgRecord* org = nullptr;
  double weight = 0.0;
};

/// An author with m organizations contributes 1/(n*m) to each of them, n
/// being the number of resolved authors. Contributions to the same
/// organization accumulate into a single entry (first-appearance order).
/// Returns an empty list when the publication has no resolved authors.
std::vector<ContributionWeight> contribution_weights(const ResolvedPublication& pub);

/// The publication-level scalar weight under `scheme`. When the scheme needs
/// an input the record lacks (citation history for a windowed scheme, the
/// named field for a custom one) the weight is 0 and *missing_input is set.
double publication_weight(const ResolvedPublication& pub, const WeightScheme& scheme,
                          bool* missing_input = nullptr);

}  // namespace geocentroid
