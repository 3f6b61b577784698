#include "geocentroid/weighting.hpp"

#include <algorithm>
#include <charconv>
#include <limits>

namespace geocentroid {

std::optional<WeightScheme> WeightScheme::parse(std::string_view spec) {
  if (spec == "unweighted") return WeightScheme{};
  if (spec == "citations") return WeightScheme{WeightSchemeKind::citations, 0, {}};
  constexpr std::string_view kWindow = "citations-window:";
  if (spec.rfind(kWindow, 0) == 0) {
    const std::string_view arg = spec.substr(kWindow.size());
    int n = 0;
    const auto res = std::from_chars(arg.data(), arg.data() + arg.size(), n);
    if (res.ec != std::errc{} || res.ptr != arg.data() + arg.size() || n < 1) {
      return std::nullopt;
    }
    return WeightScheme{WeightSchemeKind::citations_window, n, {}};
  }
  constexpr std::string_view kCustom = "custom:";
  if (spec.rfind(kCustom, 0) == 0) {
    const std::string_view name = spec.substr(kCustom.size());
    if (name.empty()) return std::nullopt;
    return WeightScheme{WeightSchemeKind::custom_field, 0, std::string(name)};
  }
  return std::nullopt;
}

std::string WeightScheme::to_string() const {
  switch (kind) {
    case WeightSchemeKind::unweighted:
      return "unweighted";
    case WeightSchemeKind::citations:
      return "citations";
    case WeightSchemeKind::citations_window:
      return "citations-window:" + std::to_string(window_years);
    case WeightSchemeKind::custom_field:
      return "custom:" + field_name;
  }
  return "unweighted";
}

std::vector<ContributionWeight> contribution_weights(const ResolvedPublication& pub) {
  std::vector<ContributionWeight> weights;
  const std::size_t n = pub.resolved_authors.size();
  if (n == 0) return weights;

  for (const auto& orgs : pub.resolved_authors) {
    const double share = 1.0 / (static_cast<double>(n) * static_cast<double>(orgs.size()));
    for (const OrgRecord* org : orgs) {
      const auto it = std::find_if(weights.begin(), weights.end(),
                                   [org](const ContributionWeight& w) { return w.org == org; });
      if (it == weights.end()) {
        weights.push_back({org, share});
      } else {
        it->weight += share;
      }
    }
  }
  return weights;
}

double publication_weight(const ResolvedPublication& pub, const WeightScheme& scheme,
                          bool* missing_input) {
  if (missing_input) *missing_input = false;
  switch (scheme.kind) {
    case WeightSchemeKind::unweighted:
      return 1.0;
    case WeightSchemeKind::citations:
      return static_cast<double>(pub.times_cited);
    case WeightSchemeKind::citations_window: {
      if (!pub.citations_by_year) {
        if (missing_input) *missing_input = true;
        return 0.0;
      }
      // window is [year, year + N - 1] inclusive
      long long total = 0;
      const auto& by_year = *pub.citations_by_year;
      const long long end_year =
          std::min<long long>(static_cast<long long>(pub.year) + scheme.window_years - 1,
                              std::numeric_limits<int>::max());
      const auto first = by_year.lower_bound(pub.year);
      const auto last = by_year.upper_bound(static_cast<int>(end_year));
      for (auto it = first; it != last; ++it) total += it->second;
      return static_cast<double>(total);
    }
    case WeightSchemeKind::custom_field: {
      if (pub.custom_weights) {
        const auto it = pub.custom_weights->find(scheme.field_name);
        if (it != pub.custom_weights->end()) return it->second;
      }
      if (missing_input) *missing_input = true;
      return 0.0;
    }
  }
  return 0.0;
}

}  // namespace geocentroid
