#include "geocentroid/org_registry.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <istream>
#include <stdexcept>

namespace geocentroid {

namespace {

// Reads one CSV record (RFC 4180: quoted fields may contain commas, doubled
// quotes and newlines). `line` tracks the physical line counter; the record's
// starting line is reported through `record_line`. Returns false at end of
// input. Blank lines are skipped.
bool read_csv_record(std::istream& in, std::vector<std::string>& fields,
                     std::size_t& line, std::size_t& record_line) {
  for (;;) {
    fields.clear();
    record_line = line;
    std::string field;
    bool in_quotes = false;
    bool saw_any = false;
    int c;
    while ((c = in.get()) != std::char_traits<char>::eof()) {
      saw_any = true;
      if (in_quotes) {
        if (c == '"') {
          if (in.peek() == '"') {
            in.get();
            field.push_back('"');
          } else {
            in_quotes = false;
          }
        } else {
          if (c == '\n') ++line;
          field.push_back(static_cast<char>(c));
        }
        continue;
      }
      if (c == ',') {
        fields.push_back(std::move(field));
        field.clear();
      } else if (c == '\n') {
        ++line;
        break;
      } else if (c == '\r' && in.peek() == '\n') {
        in.get();
        ++line;
        break;
      } else if (c == '"' && field.empty()) {
        in_quotes = true;
      } else {
        field.push_back(static_cast<char>(c));
      }
    }
    if (!saw_any) return false;
    fields.push_back(std::move(field));
    if (fields.size() == 1 && fields[0].empty()) continue;  // blank line
    return true;
  }
}

std::string_view trimmed(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool parse_double(std::string_view raw, double& out) {
  const std::string_view s = trimmed(raw);
  if (s.empty()) return false;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc{} && res.ptr == s.data() + s.size();
}

}  // namespace

const OrgRecord* OrgRegistry::find(std::string_view org_id) const {
  const auto it = entries_.find(org_id);
  return it == entries_.end() ? nullptr : &it->second;
}

OrgRegistry load_registry(std::istream& in, std::string source_path,
                          const RegistryLoadOptions& options,
                          RegistryLoadReport* report) {
  if (!in) {
    throw std::runtime_error("cannot read registry: " + source_path);
  }

  OrgRegistry registry;
  registry.source_path_ = std::move(source_path);

  RegistryLoadReport local;
  RegistryLoadReport& rep = report ? *report : local;
  rep = RegistryLoadReport{};

  std::size_t line = 1;
  std::size_t record_line = 1;
  std::vector<std::string> fields;

  if (!read_csv_record(in, fields, line, record_line)) {
    throw std::runtime_error(registry.source_path_ + ": empty registry (header row required)");
  }
  if (!fields.empty() && fields[0].size() >= 3 && fields[0].compare(0, 3, "\xEF\xBB\xBF") == 0) {
    fields[0].erase(0, 3);  // UTF-8 BOM
  }

  constexpr const char* kRequired[4] = {"org_id", "name", "latitude", "longitude"};
  std::size_t col[4];
  for (int i = 0; i < 4; ++i) {
    std::size_t found = fields.size();
    for (std::size_t j = 0; j < fields.size(); ++j) {
      if (trimmed(fields[j]) == kRequired[i]) {
        found = j;
        break;
      }
    }
    if (found == fields.size()) {
      throw std::runtime_error(registry.source_path_ + ": header is missing required column \"" +
                               kRequired[i] + "\" (need org_id,name,latitude,longitude)");
    }
    col[i] = found;
  }
  const std::size_t needed = 1 + std::max({col[0], col[1], col[2], col[3]});

  // first accepted line per org_id, for duplicate reports
  std::unordered_map<std::string, std::size_t> first_line;

  auto reject = [&](std::size_t at, std::string message) {
    ++rep.rejected;
    if (options.strict) {
      throw std::runtime_error(registry.source_path_ + ":" + std::to_string(at) + ": " + message);
    }
    rep.errors.push_back({at, std::move(message)});
  };

  while (read_csv_record(in, fields, line, record_line)) {
    ++rep.rows_total;
    if (fields.size() < needed) {
      reject(record_line, "expected at least " + std::to_string(needed) + " fields, got " +
                              std::to_string(fields.size()));
      continue;
    }
    OrgRecord rec;
    rec.org_id = fields[col[0]];
    rec.name = fields[col[1]];
    if (rec.org_id.empty()) {
      reject(record_line, "empty org_id");
      continue;
    }
    if (!parse_double(fields[col[2]], rec.latitude)) {
      reject(record_line, "invalid latitude \"" + fields[col[2]] + "\"");
      continue;
    }
    if (!parse_double(fields[col[3]], rec.longitude)) {
      reject(record_line, "invalid longitude \"" + fields[col[3]] + "\"");
      continue;
    }
    if (rec.latitude < -90.0 || rec.latitude > 90.0) {
      reject(record_line, "latitude out of range");
      continue;
    }
    if (rec.longitude < -180.0 || rec.longitude > 180.0) {
      reject(record_line, "longitude out of range");
      continue;
    }
    const auto [it, inserted] = first_line.try_emplace(rec.org_id, record_line);
    if (!inserted) {
      reject(record_line, "duplicate org_id \"" + rec.org_id + "\" (first defined at line " +
                              std::to_string(it->second) + ")");
      continue;
    }
    ++rep.accepted;
    registry.entries_.emplace(rec.org_id, std::move(rec));
  }

  return registry;
}

OrgRegistry load_registry_file(const std::string& path,
                               const RegistryLoadOptions& options,
                               RegistryLoadReport* report) {
  std::ifstream in(path, std::ios::binary);
  if (!in.is_open()) {
    throw std::runtime_error("cannot open registry file: " + path);
  }
  return load_registry(in, path, options, report);
}

}  // namespace geocentroid
