#include "geocentroid/period.hpp"

#include <charconv>
#include <cstdio>

namespace geocentroid {

std::string_view to_string(Granularity g) {
  return g == Granularity::year ? "year" : "month";
}

std::optional<Granularity> parse_granularity(std::string_view s) {
  if (s == "year") return Granularity::year;
  if (s == "month") return Granularity::month;
  return std::nullopt;
}

std::string PeriodKey::to_string() const {
  if (!month) return std::to_string(year);
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02d", year, *month);
  return buf;
}

std::optional<PeriodKey> PeriodKey::parse(std::string_view s) {
  if (s.empty()) return std::nullopt;
  const auto dash = s.find('-');
  const std::string_view year_part = s.substr(0, dash);

  PeriodKey key;
  auto res = std::from_chars(year_part.data(), year_part.data() + year_part.size(), key.year);
  if (res.ec != std::errc{} || res.ptr != year_part.data() + year_part.size()) {
    return std::nullopt;
  }
  if (dash == std::string_view::npos) return key;

  const std::string_view month_part = s.substr(dash + 1);
  int m = 0;
  res = std::from_chars(month_part.data(), month_part.data() + month_part.size(), m);
  if (res.ec != std::errc{} || res.ptr != month_part.data() + month_part.size() ||
      m < 1 || m > 12) {
    return std::nullopt;
  }
  key.month = m;
  return key;
}

}  // namespace geocentroid
