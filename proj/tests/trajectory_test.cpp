#include <doctest.h>

#include <array>
#include <cmath>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "geocentroid/trajectory.hpp"

using namespace geocentroid;

namespace {

OrgRegistry registry_of(const std::string& csv) {
  std::istringstream in(csv);
  return load_registry(in, "test.csv");
}

TrajectoryResult run(const std::string& jsonl, const OrgRegistry& reg,
                     const TrajectoryConfig& cfg) {
  StringLineReader in(jsonl);
  return build_trajectory(in, reg, cfg);
}

TrajectoryConfig config(const char* scheme) {
  TrajectoryConfig cfg;
  cfg.scheme = *WeightScheme::parse(scheme);
  return cfg;
}

// ten orgs on a fixed grid
const std::string kGridCsv = [] {
  std::string csv = "org_id,name,latitude,longitude\n";
  for (int i = 0; i < 10; ++i) {
    csv += "g" + std::to_string(i) + ",Org " + std::to_string(i) + "," +
           std::to_string(-45 + i * 10) + "," + std::to_string(-150 + i * 30) + "\n";
  }
  return csv;
}();

}  // namespace

TEST_CASE("a single 1671 publication becomes one non-robust point at its organization") {
  const auto reg = registry_of("org_id,name,latitude,longitude\ncam,Cambridge,52.2053,0.1218\n");
  const auto result = run(
      R"({"id":"newton-1671","year":1671,"authors":[{"org_ids":["cam"]}]})"
      "\n",
      reg, config("unweighted"));

  REQUIRE(result.points.size() == 1);
  const TrajectoryPoint& p = result.points[0];
  CHECK(p.period.to_string() == "1671");
  CHECK(p.latitude == 52.2053);
  CHECK(p.longitude == 0.1218);
  CHECK(p.n_pubs == 1);
  CHECK(p.total_weight == 1.0);
  CHECK_FALSE(p.robust);  // 1 < the default threshold of 1000

  REQUIRE(result.stats.size() == 1);
  CHECK(result.stats[0].n_records_total == 1);
  CHECK(result.stats[0].n_records_contributing == 1);
  CHECK(result.stats[0].n_records_skipped == 0);
}

TEST_CASE("zero-weight periods keep their statistics but yield no point") {
  const auto reg = registry_of(kGridCsv);
  const std::string jsonl =
      R"({"id":"a","year":2019,"times_cited":0,"authors":[{"org_ids":["g1"]}]})"
      "\n"
      R"({"id":"b","year":2019,"times_cited":0,"authors":[{"org_ids":["g2"]}]})"
      "\n"
      R"({"id":"c","year":2020,"times_cited":3,"authors":[{"org_ids":["g3"]}]})"
      "\n";
  const auto result = run(jsonl, reg, config("citations"));

  REQUIRE(result.points.size() == 1);
  CHECK(result.points[0].period.to_string() == "2020");
  CHECK(result.points[0].total_weight == 3.0);

  REQUIRE(result.stats.size() == 2);
  CHECK(result.stats[0].period.to_string() == "2019");
  CHECK(result.stats[0].n_records_total == 2);
  CHECK(result.stats[0].n_records_contributing == 2);  // resolvable, just weightless
  CHECK(result.stats[0].n_records_skipped == 0);
  CHECK(result.counters.zero_weight == 2);
}

TEST_CASE("the robustness flag flips exactly at the threshold") {
  const auto reg = registry_of(kGridCsv);
  std::string jsonl;
  for (int i = 0; i < 3; ++i) {
    jsonl += R"({"id":"x)" + std::to_string(i) +
             R"(","year":2020,"authors":[{"org_ids":["g1"]}]})" "\n";
  }
  for (int i = 0; i < 2; ++i) {
    jsonl += R"({"id":"y)" + std::to_string(i) +
             R"(","year":2021,"authors":[{"org_ids":["g2"]}]})" "\n";
  }
  auto cfg = config("unweighted");
  cfg.min_records = 3;
  const auto result = run(jsonl, reg, cfg);
  REQUIRE(result.points.size() == 2);
  CHECK(result.points[0].n_pubs == 3);
  CHECK(result.points[0].robust);
  CHECK(result.points[1].n_pubs == 2);
  CHECK_FALSE(result.points[1].robust);
}

TEST_CASE("points come out chronologically sorted") {
  const auto reg = registry_of(kGridCsv);
  const std::string jsonl =
      R"({"id":"a","year":2021,"authors":[{"org_ids":["g1"]}]})" "\n"
      R"({"id":"b","year":2019,"authors":[{"org_ids":["g2"]}]})" "\n"
      R"({"id":"c","year":2020,"authors":[{"org_ids":["g3"]}]})" "\n";
  const auto result = run(jsonl, reg, config("unweighted"));
  REQUIRE(result.points.size() == 3);
  CHECK(result.points[0].period.year == 2019);
  CHECK(result.points[1].period.year == 2020);
  CHECK(result.points[2].period.year == 2021);
}

TEST_CASE("the period window is inclusive and counted") {
  const auto reg = registry_of(kGridCsv);
  const std::string jsonl =
      R"({"id":"a","year":2018,"authors":[{"org_ids":["g1"]}]})" "\n"
      R"({"id":"b","year":2019,"authors":[{"org_ids":["g1"]}]})" "\n"
      R"({"id":"c","year":2020,"authors":[{"org_ids":["g1"]}]})" "\n"
      R"({"id":"d","year":2021,"authors":[{"org_ids":["g1"]}]})" "\n";
  auto cfg = config("unweighted");
  cfg.from = PeriodKey{2019, std::nullopt};
  cfg.to = PeriodKey{2020, std::nullopt};
  const auto result = run(jsonl, reg, cfg);
  REQUIRE(result.stats.size() == 2);
  CHECK(result.stats[0].period.year == 2019);
  CHECK(result.stats[1].period.year == 2020);
  CHECK(result.counters.filtered_out == 2);
}

TEST_CASE("month granularity buckets by month and counts undated records") {
  const auto reg = registry_of(kGridCsv);
  const std::string jsonl =
      R"({"id":"a","year":2020,"month":3,"authors":[{"org_ids":["g1"]}]})" "\n"
      R"({"id":"b","year":2020,"month":3,"authors":[{"org_ids":["g2"]}]})" "\n"
      R"({"id":"c","year":2020,"authors":[{"org_ids":["g3"]}]})" "\n";
  auto cfg = config("unweighted");
  cfg.granularity = Granularity::month;
  const auto result = run(jsonl, reg, cfg);
  REQUIRE(result.stats.size() == 1);
  CHECK(result.stats[0].period.to_string() == "2020-03");
  CHECK(result.stats[0].n_records_total == 2);
  CHECK(result.counters.undated == 1);
}

TEST_CASE("unresolvable records are skipped in place") {
  const auto reg = registry_of(kGridCsv);
  const std::string jsonl =
      R"({"id":"a","year":2020,"authors":[{"org_ids":["nope"]}]})" "\n"
      R"({"id":"b","year":2020,"authors":[{"org_ids":["g1","gone"]}]})" "\n"
      R"({"id":"c","year":2020})" "\n";
  const auto result = run(jsonl, reg, config("unweighted"));
  REQUIRE(result.stats.size() == 1);
  CHECK(result.stats[0].n_records_total == 3);
  CHECK(result.stats[0].n_records_contributing == 1);  // only b resolves
  CHECK(result.stats[0].n_records_skipped == 2);
  CHECK(result.counters.unresolvable == 2);
  CHECK(result.counters.dropped_org_refs == 2);  // nope, gone
  CHECK(result.counters.dropped_authors == 1);
  REQUIRE(result.points.size() == 1);
  CHECK(result.points[0].latitude == -35.0);  // g1 alone
}

TEST_CASE("malformed lines become line-numbered diagnostics and the run continues") {
  const auto reg = registry_of(kGridCsv);
  const std::string jsonl =
      R"({"id":"a","year":2020,"authors":[{"org_ids":["g1"]}]})" "\n"
      "{broken\n"
      "\n"
      R"({"id":"b","year":9999,"authors":[{"org_ids":["g1"]}]})" "\n"
      R"({"id":"c","year":2020,"authors":[{"org_ids":["g2"]}]})" "\n";
  const auto result = run(jsonl, reg, config("unweighted"));
  CHECK(result.counters.records_read == 4);  // the blank line is not a record
  CHECK(result.counters.parse_errors == 2);
  REQUIRE(result.diagnostics.size() == 2);
  CHECK(result.diagnostics[0].line == 2);
  CHECK(result.diagnostics[0].message == "invalid JSON");
  CHECK(result.diagnostics[1].line == 4);
  CHECK(result.diagnostics[1].message == "year out of range");
  CHECK_FALSE(result.aborted);
  REQUIRE(result.stats.size() == 1);
  CHECK(result.stats[0].n_records_total == 2);
}

TEST_CASE("strict mode aborts on the first malformed line") {
  const auto reg = registry_of(kGridCsv);
  auto cfg = config("unweighted");
  cfg.strict = true;
  const auto result = run(
      R"({"id":"a","year":2020,"authors":[{"org_ids":["g1"]}]})" "\n"
      "{broken\n"
      R"({"id":"b","year":2020,"authors":[{"org_ids":["g1"]}]})" "\n",
      reg, cfg);
  CHECK(result.aborted);
  REQUIRE(result.diagnostics.size() == 1);
  CHECK(result.diagnostics[0].line == 2);
}

TEST_CASE("the diagnostics cap suppresses overflow but keeps counting") {
  const auto reg = registry_of(kGridCsv);
  auto cfg = config("unweighted");
  cfg.max_diagnostics = 3;
  std::string jsonl;
  for (int i = 0; i < 8; ++i) jsonl += "{bad\n";
  const auto result = run(jsonl, reg, cfg);
  CHECK(result.counters.parse_errors == 8);
  CHECK(result.diagnostics.size() == 3);
  CHECK(result.counters.diagnostics_suppressed == 5);
}

TEST_CASE("empty input is empty output, not an error") {
  const auto reg = registry_of(kGridCsv);
  const auto result = run("", reg, config("unweighted"));
  CHECK(result.points.empty());
  CHECK(result.stats.empty());
  CHECK(result.counters.records_read == 0);
}

TEST_CASE("missing custom weight input is counted per record") {
  const auto reg = registry_of(kGridCsv);
  const std::string jsonl =
      R"({"id":"a","year":2020,"weights":{"score":2},"authors":[{"org_ids":["g1"]}]})" "\n"
      R"({"id":"b","year":2020,"authors":[{"org_ids":["g2"]}]})" "\n";
  const auto result = run(jsonl, reg, config("custom:score"));
  CHECK(result.counters.missing_weight_input == 1);
  REQUIRE(result.points.size() == 1);
  CHECK(result.points[0].total_weight == 2.0);
  CHECK(result.points[0].n_pubs == 1);  // the weightless record adds nothing
}

namespace {

// deterministic record corpus for the cross-checks below
std::vector<std::string> random_corpus(int count, bool with_scores, int score_scale) {
  std::mt19937_64 rng(5150);
  std::vector<std::string> lines;
  lines.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const int year = 2018 + static_cast<int>(rng() % 3);
    const int cited = static_cast<int>(rng() % 20);
    const int n_authors = 1 + static_cast<int>(rng() % 4);
    std::string line = R"({"id":"r)" + std::to_string(i) + R"(","year":)" +
                       std::to_string(year) + R"(,"times_cited":)" + std::to_string(cited);
    if (with_scores && rng() % 8 != 0) {  // leave some records without the field
      line += R"(,"weights":{"score":)" +
              std::to_string(static_cast<int>(rng() % 10) * score_scale) + "}";
    }
    line += R"(,"authors":[)";
    for (int a = 0; a < n_authors; ++a) {
      if (a != 0) line += ',';
      const int m = 1 + static_cast<int>(rng() % 3);
      line += R"({"org_ids":[)";
      for (int o = 0; o < m; ++o) {
        if (o != 0) line += ',';
        line += "\"g" + std::to_string(rng() % 10) + "\"";
      }
      line += "]}";
    }
    line += "]}";
    lines.push_back(std::move(line));
  }
  return lines;
}

std::string joined(const std::vector<std::string>& lines) {
  std::string all;
  for (const auto& l : lines) {
    all += l;
    all += '\n';
  }
  return all;
}

}  // namespace

TEST_CASE("the streaming pipeline matches a naive in-memory mean") {
  const auto reg = registry_of(kGridCsv);
  const auto lines = random_corpus(400, false, 1);
  const auto result = run(joined(lines), reg, config("citations"));

  // oracle: load everything, apply the definitions directly with plain doubles
  std::map<PeriodKey, std::array<double, 3>> sums;  // w*lat, w*long, w
  for (const auto& line : lines) {
    std::string error;
    const auto rec = parse_record(line, ParseLimits{}, error);
    REQUIRE(rec.has_value());
    const auto resolved = resolve_affiliations(*rec, reg);
    if (resolved.resolved_authors.empty()) continue;
    const double n = static_cast<double>(resolved.resolved_authors.size());
    double lat = 0.0, lon = 0.0;
    for (const auto& orgs : resolved.resolved_authors) {
      const double share = 1.0 / (n * static_cast<double>(orgs.size()));
      for (const OrgRecord* org : orgs) {
        lat += share * org->latitude;
        lon += share * org->longitude;
      }
    }
    const double w = static_cast<double>(rec->times_cited);
    auto& s = sums[PeriodKey{rec->year, std::nullopt}];
    s[0] += w * lat;
    s[1] += w * lon;
    s[2] += w;
  }

  std::size_t expected_points = 0;
  for (const auto& [key, s] : sums) {
    if (s[2] <= 0.0) continue;
    ++expected_points;
    bool found = false;
    for (const auto& p : result.points) {
      if (p.period == key) {
        found = true;
        CHECK(std::abs(p.latitude - s[0] / s[2]) < 1e-9);
        CHECK(std::abs(p.longitude - s[1] / s[2]) < 1e-9);
        CHECK(std::abs(p.total_weight - s[2]) < 1e-6);
      }
    }
    CHECK_MESSAGE(found, key.to_string());
  }
  CHECK(result.points.size() == expected_points);
}

TEST_CASE("worker count does not change the result") {
  const auto reg = registry_of(kGridCsv);
  const auto jsonl = joined(random_corpus(3000, false, 1));

  auto cfg = config("citations");
  cfg.threads = 1;
  const auto sequential = run(jsonl, reg, cfg);
  cfg.threads = 4;
  const auto parallel = run(jsonl, reg, cfg);

  REQUIRE(sequential.points.size() == parallel.points.size());
  for (std::size_t i = 0; i < sequential.points.size(); ++i) {
    CHECK(sequential.points[i].period == parallel.points[i].period);
    CHECK(std::abs(sequential.points[i].latitude - parallel.points[i].latitude) < 1e-9);
    CHECK(std::abs(sequential.points[i].longitude - parallel.points[i].longitude) < 1e-9);
    CHECK(sequential.points[i].n_pubs == parallel.points[i].n_pubs);
  }
  REQUIRE(sequential.stats.size() == parallel.stats.size());
  for (std::size_t i = 0; i < sequential.stats.size(); ++i) {
    CHECK(sequential.stats[i].n_records_total == parallel.stats[i].n_records_total);
    CHECK(sequential.stats[i].n_records_contributing ==
          parallel.stats[i].n_records_contributing);
  }
  CHECK(sequential.counters.records_read == parallel.counters.records_read);
  CHECK(sequential.counters.zero_weight == parallel.counters.zero_weight);
}

TEST_CASE("parallel diagnostics keep their line numbers") {
  const auto reg = registry_of(kGridCsv);
  auto lines = random_corpus(2500, false, 1);
  lines[1300] = "{broken";
  lines[2400] = R"({"id":"x","year":1})";
  auto cfg = config("unweighted");
  cfg.threads = 4;
  const auto result = run(joined(lines), reg, cfg);
  REQUIRE(result.diagnostics.size() == 2);
  CHECK(result.diagnostics[0].line == 1301);
  CHECK(result.diagnostics[1].line == 2401);
  CHECK(result.counters.parse_errors == 2);
}

TEST_CASE("scaling every custom weight leaves the coordinates unchanged") {
  const auto reg = registry_of(kGridCsv);
  const auto base = run(joined(random_corpus(500, true, 1)), reg, config("custom:score"));
  const auto scaled = run(joined(random_corpus(500, true, 7)), reg, config("custom:score"));

  REQUIRE(base.points.size() == scaled.points.size());
  for (std::size_t i = 0; i < base.points.size(); ++i) {
    CHECK(base.points[i].period == scaled.points[i].period);
    CHECK(std::abs(base.points[i].latitude - scaled.points[i].latitude) < 1e-9);
    CHECK(std::abs(base.points[i].longitude - scaled.points[i].longitude) < 1e-9);
  }
}

TEST_CASE("period_counts reports the same statistics without any points") {
  const auto reg = registry_of(kGridCsv);
  const auto jsonl = joined(random_corpus(300, false, 1));

  StringLineReader in(jsonl);
  const auto counted = period_counts(in, reg, config("unweighted"));
  const auto full = run(jsonl, reg, config("unweighted"));

  CHECK(counted.points.empty());
  REQUIRE(counted.stats.size() == full.stats.size());
  for (std::size_t i = 0; i < counted.stats.size(); ++i) {
    CHECK(counted.stats[i].period == full.stats[i].period);
    CHECK(counted.stats[i].n_records_total == full.stats[i].n_records_total);
    CHECK(counted.stats[i].n_records_contributing == full.stats[i].n_records_contributing);
    CHECK(counted.stats[i].n_records_skipped == full.stats[i].n_records_skipped);
  }
}

TEST_CASE("spherical runs skip degenerate publications and keep going") {
  const auto reg = registry_of(
      "org_id,name,latitude,longitude\n"
      "a,A,0,0\n"
      "b,B,0,180\n"
      "c,C,10,10\n");
  const std::string jsonl =
      R"({"id":"bad","year":2020,"authors":[{"org_ids":["a"]},{"org_ids":["b"]}]})" "\n"
      R"({"id":"good","year":2020,"authors":[{"org_ids":["c"]}]})" "\n";
  auto cfg = config("unweighted");
  cfg.mode = CentroidMode::spherical;
  const auto result = run(jsonl, reg, cfg);
  CHECK(result.counters.degenerate_spherical == 1);
  REQUIRE(result.points.size() == 1);
  CHECK(result.points[0].n_pubs == 1);
  CHECK(result.points[0].latitude == doctest::Approx(10.0).epsilon(1e-9));
}
