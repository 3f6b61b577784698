#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace geocentroid {

/// One registry entry: an organization id pinned to the coordinates of its
/// principal campus. Coordinates are decimal degrees, latitude in [-90, 90]
/// and longitude in [-180, 180].
struct OrgRecord {
  std::string org_id;
  std::string name;
  double latitude = 0.0;
  double longitude = 0.0;
};

struct RegistryRowError {
  std::size_t line = 0;  // physical line where the offending row starts
  std::string message;
};

struct RegistryLoadReport {
  std::size_t rows_total = 0;  // data rows seen (header and blank lines excluded)
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::vector<RegistryRowError> errors;
};

struct RegistryLoadOptions {
  bool strict = false;  // fail on the first bad row instead of collecting it
};

/// Immutable id -> OrgRecord map. Identifiers are opaque, case-sensitive
/// strings. Safe for concurrent reads once loaded.
class OrgRegistry {
 public:
  /// Exact-match lookup; nullptr means not found (a normal outcome).
  const OrgRecord* find(std::string_view org_id) const;

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const std::string& source_path() const { return source_path_; }

 private:
  friend OrgRegistry load_registry(std::istream&, std::string,
                                   const RegistryLoadOptions&,
                                   RegistryLoadReport*);

  struct StringHash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const noexcept {
      return std::hash<std::string_view>{}(s);
    }
  };

  std::unordered_map<std::string, OrgRecord, StringHash, std::equal_to<>> entries_;
  std::string source_path_;
};

/// Loads a registry from CSV (UTF-8, RFC 4180 quoting). The header row must
/// contain the columns org_id, name, latitude and longitude; extra columns
/// are ignored. Invalid rows are rejected and reported per row. Throws
/// std::runtime_error on an unreadable stream, a bad header, or (in strict
/// mode) the first bad row.
OrgRegistry load_registry(std::istream& in, std::string source_path,
                          const RegistryLoadOptions& options = {},
                          RegistryLoadReport* report = nullptr);

OrgRegistry load_registry_file(const std::string& path,
                               const RegistryLoadOptions& options = {},
                               RegistryLoadReport* report = nullptr);

}  // namespace geocentroid
