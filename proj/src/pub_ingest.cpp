#include "geocentroid/pub_ingest.hpp"

#include <algorithm>
#include <charconv>
#include <climits>

#include <json.hpp>

namespace geocentroid {

namespace {

using nlohmann::json;

bool get_integer(const json& v, long long& out) {
  if (v.is_number_unsigned()) {
    const auto u = v.get<unsigned long long>();
    if (u > static_cast<unsigned long long>(LLONG_MAX)) return false;
    out = static_cast<long long>(u);
    return true;
  }
  if (v.is_number_integer()) {
    out = v.get<long long>();
    return true;
  }
  return false;
}

bool parse_year_key(const std::string& key, int& out) {
  const auto res = std::from_chars(key.data(), key.data() + key.size(), out);
  return res.ec == std::errc{} && res.ptr == key.data() + key.size();
}

}  // namespace

std::optional<PublicationRecord> parse_record(std::string_view line,
                                              const ParseLimits& limits,
                                              std::string& error) {
  const json j = json::parse(line, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) {
    error = "invalid JSON";
    return std::nullopt;
  }
  if (!j.is_object()) {
    error = "record must be a JSON object";
    return std::nullopt;
  }

  PublicationRecord rec;

  const auto id = j.find("id");
  if (id == j.end() || !id->is_string()) {
    error = "missing or non-string id";
    return std::nullopt;
  }
  rec.pub_id = id->get<std::string>();
  if (rec.pub_id.empty()) {
    error = "empty id";
    return std::nullopt;
  }

  const auto year = j.find("year");
  long long y = 0;
  if (year == j.end() || !get_integer(*year, y)) {
    error = "missing or non-integer year";
    return std::nullopt;
  }
  if (y < limits.year_min || y > limits.year_max) {
    error = "year out of range";
    return std::nullopt;
  }
  rec.year = static_cast<int>(y);

  if (const auto month = j.find("month"); month != j.end() && !month->is_null()) {
    long long m = 0;
    if (!get_integer(*month, m)) {
      error = "non-integer month";
      return std::nullopt;
    }
    if (m < 1 || m > 12) {
      error = "month out of range";
      return std::nullopt;
    }
    rec.month = static_cast<int>(m);
  }

  if (const auto tc = j.find("times_cited"); tc != j.end() && !tc->is_null()) {
    if (!get_integer(*tc, rec.times_cited)) {
      error = "non-integer times_cited";
      return std::nullopt;
    }
    if (rec.times_cited < 0) {
      error = "negative citation count";
      return std::nullopt;
    }
  }

  if (const auto cby = j.find("citations_by_year"); cby != j.end() && !cby->is_null()) {
    if (!cby->is_object()) {
      error = "citations_by_year must be an object";
      return std::nullopt;
    }
    std::map<int, long long> by_year;
    for (const auto& [key, value] : cby->items()) {
      int ky = 0;
      if (!parse_year_key(key, ky)) {
        error = "citations_by_year key \"" + key + "\" is not a year";
        return std::nullopt;
      }
      long long count = 0;
      if (!get_integer(value, count)) {
        error = "non-integer citation count for year " + key;
        return std::nullopt;
      }
      if (count < 0) {
        error = "negative citation count";
        return std::nullopt;
      }
      by_year[ky] = count;
    }
    rec.citations_by_year = std::move(by_year);
  }

  if (const auto w = j.find("weights"); w != j.end() && !w->is_null()) {
    if (!w->is_object()) {
      error = "weights must be an object";
      return std::nullopt;
    }
    std::map<std::string, double> weights;
    for (const auto& [key, value] : w->items()) {
      if (!value.is_number()) {
        error = "weight \"" + key + "\" must be a number";
        return std::nullopt;
      }
      const double d = value.get<double>();
      if (d < 0.0) {
        error = "negative weight";
        return std::nullopt;
      }
      weights[key] = d;
    }
    rec.custom_weights = std::move(weights);
  }

  if (const auto authors = j.find("authors"); authors != j.end() && !authors->is_null()) {
    if (!authors->is_array()) {
      error = "authors must be an array";
      return std::nullopt;
    }
    rec.authors.reserve(authors->size());
    for (const auto& a : *authors) {
      if (!a.is_object()) {
        error = "author entries must be objects";
        return std::nullopt;
      }
      AuthorEntry entry;
      if (const auto name = a.find("name"); name != a.end() && !name->is_null()) {
        if (!name->is_string()) {
          error = "author name must be a string";
          return std::nullopt;
        }
        entry.display_name = name->get<std::string>();
      }
      if (const auto ids = a.find("org_ids"); ids != a.end() && !ids->is_null()) {
        if (!ids->is_array()) {
          error = "org_ids must be an array of strings";
          return std::nullopt;
        }
        entry.org_ids.reserve(ids->size());
        for (const auto& oid : *ids) {
          if (!oid.is_string()) {
            error = "org_ids must be an array of strings";
            return std::nullopt;
          }
          entry.org_ids.push_back(oid.get<std::string>());
        }
      }
      rec.authors.push_back(std::move(entry));
    }
  }

  return rec;
}

ResolvedPublication resolve_affiliations(const PublicationRecord& record,
                                         const OrgRegistry& registry) {
  ResolvedPublication resolved;
  resolved.pub_id = record.pub_id;
  resolved.year = record.year;
  resolved.month = record.month;
  resolved.times_cited = record.times_cited;
  resolved.citations_by_year = record.citations_by_year;
  resolved.custom_weights = record.custom_weights;
  resolved.resolved_authors.reserve(record.authors.size());

  std::vector<std::string_view> distinct;
  for (const AuthorEntry& author : record.authors) {
    distinct.clear();
    for (const std::string& id : author.org_ids) {
      if (std::find(distinct.begin(), distinct.end(), id) == distinct.end()) {
        distinct.push_back(id);
      }
    }
    std::vector<const OrgRecord*> orgs;
    orgs.reserve(distinct.size());
    for (const std::string_view id : distinct) {
      if (const OrgRecord* rec = registry.find(id)) {
        orgs.push_back(rec);
      } else {
        ++resolved.dropped_org_ref_count;
      }
    }
    if (orgs.empty()) {
      ++resolved.dropped_author_count;
    } else {
      resolved.resolved_authors.push_back(std::move(orgs));
    }
  }
  return resolved;
}

}  // namespace geocentroid
