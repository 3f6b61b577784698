#pragma once

#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace geocentroid {

enum class Granularity { year, month };

std::string_view to_string(Granularity g);
std::optional<Granularity> parse_granularity(std::string_view s);

/// One time bucket. The month is present iff the run granularity is month.
/// Ordering is chronological; a year-only key sorts before any month key of
/// the same year.
struct PeriodKey {
  int year = 0;
  std::optional<int> month;  // 1..12

  auto operator<=>(const PeriodKey&) const = default;

  /// "1671" or "2020-03".
  std::string to_string() const;

  /// Parses both forms produced by to_string. Returns nullopt on anything
  /// else (including a month outside 1..12).
  static std::optional<PeriodKey> parse(std::string_view s);
};

}  // namespace geocentroid
