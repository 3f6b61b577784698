#include "geocentroid/synth.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <random>
#include <stdexcept>

#include "geocentroid/num_format.hpp"

namespace geocentroid {

namespace {

// Closed-interval draw via modulo. Slightly biased, which is irrelevant for
// fixture data; what matters is that the byte stream is pinned by the seed.
std::uint64_t draw(std::mt19937_64& rng, std::uint64_t lo, std::uint64_t hi) {
  return lo + rng() % (hi - lo + 1);
}

// Uniform in [lo, hi) from the top 53 bits, the usual bias-free construction.
double draw_real(std::mt19937_64& rng, double lo, double hi) {
  const double unit = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + unit * (hi - lo);
}

struct SynthOrg {
  std::string org_id;
  double latitude;
  double longitude;
};

std::vector<std::pair<double, double>> read_org_list(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in.is_open()) {
    throw std::runtime_error("cannot open organization list: " + path);
  }
  std::vector<std::pair<double, double>> coords;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::size_t comma = line.find(',');
    double lat = 0.0, lon = 0.0;
    bool ok = comma != std::string::npos;
    if (ok) {
      const char* b = line.data();
      auto r1 = std::from_chars(b, b + comma, lat);
      auto r2 = std::from_chars(b + comma + 1, b + line.size(), lon);
      ok = r1.ec == std::errc{} && r1.ptr == b + comma && r2.ec == std::errc{} &&
           r2.ptr == b + line.size();
    }
    if (!ok || lat < -90.0 || lat > 90.0 || lon < -180.0 || lon > 180.0) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": expected \"latitude,longitude\" within valid ranges");
    }
    coords.emplace_back(lat, lon);
  }
  return coords;
}

}  // namespace

std::optional<std::string> validate_synth_config(const SynthConfig& config) {
  if (config.plan.empty()) return "plan must name at least one period";
  if (config.org_pool == 0) return "organization pool must not be empty";
  if (config.authors_min < 1) return "authors per publication must be at least 1";
  if (config.authors_max < config.authors_min) return "authors bounds are inverted";
  if (config.orgs_min < 1) return "organizations per author must be at least 1";
  if (config.orgs_max < config.orgs_min) return "organization bounds are inverted";
  if (config.cite_max < config.cite_min) return "citation bounds are inverted";
  return std::nullopt;
}

SynthSummary generate_synthetic(const SynthConfig& config, const std::string& registry_path,
                                const std::string& pubs_path) {
  if (const auto problem = validate_synth_config(config)) {
    throw std::runtime_error("synthetic config: " + *problem);
  }

  std::mt19937_64 rng(config.seed);

  // Organization pool first so the publication stream never perturbs it.
  std::vector<SynthOrg> orgs;
  orgs.reserve(config.org_pool);
  std::vector<std::pair<double, double>> listed;
  if (config.org_list_path) {
    listed = read_org_list(*config.org_list_path);
    if (listed.size() < config.org_pool) {
      throw std::runtime_error("organization list holds " + std::to_string(listed.size()) +
                               " entries, pool needs " + std::to_string(config.org_pool));
    }
  }
  for (std::size_t i = 0; i < config.org_pool; ++i) {
    char id[32];
    std::snprintf(id, sizeof id, "synth.%06zu", i + 1);
    double lat, lon;
    if (config.org_list_path) {
      lat = listed[i].first;
      lon = listed[i].second;
    } else {
      lat = draw_real(rng, -90.0, 90.0);
      lon = draw_real(rng, -180.0, 180.0);
    }
    orgs.push_back({id, lat, lon});
  }

  std::ofstream reg(registry_path, std::ios::binary);
  if (!reg.is_open()) {
    throw std::runtime_error("cannot write registry: " + registry_path);
  }
  reg << "org_id,name,latitude,longitude\n";
  for (std::size_t i = 0; i < orgs.size(); ++i) {
    reg << orgs[i].org_id << ",Synthetic Org " << (i + 1) << ','
        << format_fixed(orgs[i].latitude, 6) << ',' << format_fixed(orgs[i].longitude, 6)
        << '\n';
  }
  reg.flush();
  if (!reg) throw std::runtime_error("write failed: " + registry_path);

  std::ofstream pubs(pubs_path, std::ios::binary);
  if (!pubs.is_open()) {
    throw std::runtime_error("cannot write publications: " + pubs_path);
  }

  SynthSummary summary;
  summary.organizations = orgs.size();
  std::string line;
  std::vector<std::size_t> chosen;
  std::uint64_t serial = 0;
  for (const auto& [period, count] : config.plan) {
    for (std::uint64_t k = 0; k < count; ++k) {
      ++serial;
      const auto n_authors =
          static_cast<std::uint32_t>(draw(rng, config.authors_min, config.authors_max));

      line.clear();
      line += "{\"id\":\"synth-";
      char buf[32];
      std::snprintf(buf, sizeof buf, "%08llu", static_cast<unsigned long long>(serial));
      line += buf;
      line += "\",\"year\":";
      line += std::to_string(period.year);
      if (period.month) {
        line += ",\"month\":";
        line += std::to_string(*period.month);
      }
      line += ",\"times_cited\":";
      line += std::to_string(draw(rng, config.cite_min, config.cite_max));
      line += ",\"authors\":[";
      for (std::uint32_t a = 0; a < n_authors; ++a) {
        const auto want =
            static_cast<std::size_t>(draw(rng, config.orgs_min, config.orgs_max));
        const std::size_t m = want < orgs.size() ? want : orgs.size();
        chosen.clear();
        while (chosen.size() < m) {
          const auto idx = static_cast<std::size_t>(rng() % orgs.size());
          bool seen = false;
          for (const std::size_t c : chosen) {
            if (c == idx) {
              seen = true;
              break;
            }
          }
          if (!seen) chosen.push_back(idx);
        }
        if (a != 0) line += ',';
        line += "{\"org_ids\":[";
        for (std::size_t j = 0; j < chosen.size(); ++j) {
          if (j != 0) line += ',';
          line += '"';
          line += orgs[chosen[j]].org_id;
          line += '"';
        }
        line += "]}";
      }
      line += "]}\n";
      pubs << line;
      ++summary.publications;
    }
  }
  pubs.flush();
  if (!pubs) throw std::runtime_error("write failed: " + pubs_path);
  return summary;
}

}  // namespace geocentroid
