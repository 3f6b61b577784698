#include <CLI11.hpp>

#include <charconv>
#include <chrono>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "geocentroid/export.hpp"
#include "geocentroid/line_reader.hpp"
#include "geocentroid/org_registry.hpp"
#include "geocentroid/synth.hpp"
#include "geocentroid/trajectory.hpp"
#include "geocentroid/version.hpp"

namespace {

using namespace geocentroid;
using Clock = std::chrono::steady_clock;

// Bad flag values exit with the usage code (2), like unknown flags; data and
// I/O problems exit 1.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IngestOpts {
  std::string pubs;
  std::string registry;
  std::string granularity = "year";
  std::string from;
  std::string to;
  unsigned threads = 0;  // 0 = all hardware threads
  bool deterministic = false;
  bool strict = false;
  std::size_t max_diagnostics = 1000;
};

struct ComputeOpts {
  std::string weight = "citations";
  std::string mode = "planar";
  std::uint64_t min_records = 1000;
  std::string format = "csv";
  std::string out;
  std::string stats_out;
  int width = 1000;
  int height = 500;
  bool labels = false;
  int label_every = 10;
  std::string base_map;
};

struct StatsOpts {
  std::string out;
};

struct ValidateOpts {
  std::string pubs;
  std::string registry;
  std::size_t max_diagnostics = 1000;
};

struct SynthOpts {
  std::string registry;
  std::string pubs;
  std::vector<std::string> plan;
  std::uint64_t seed = 42;
  std::size_t orgs = 100;
  std::uint32_t authors_min = 1;
  std::uint32_t authors_max = 10;
  std::uint32_t orgs_min = 1;
  std::uint32_t orgs_max = 3;
  std::uint32_t cite_min = 0;
  std::uint32_t cite_max = 100;
  std::string org_list;
};

void add_ingest_flags(CLI::App* cmd, IngestOpts& o) {
  cmd->add_option("-p,--pubs", o.pubs, "Publications file (JSONL, gzip detected by content)")
      ->envname("GEOCENTROID_PUBS")
      ->required();
  cmd->add_option("-r,--registry", o.registry, "Organization registry CSV")
      ->envname("GEOCENTROID_REGISTRY")
      ->required();
  cmd->add_option("-g,--granularity", o.granularity, "Period granularity")
      ->check(CLI::IsMember({"year", "month"}))
      ->capture_default_str();
  cmd->add_option("--from", o.from, "First period to include, e.g. 1990 or 2020-01");
  cmd->add_option("--to", o.to, "Last period to include (inclusive)");
  cmd->add_option("-t,--threads", o.threads, "Pipeline workers (0 = all hardware threads)");
  cmd->add_flag("--deterministic", o.deterministic,
                "Single worker, bit-stable accumulation; reruns are byte-identical");
  cmd->add_flag("--strict", o.strict, "First malformed record or registry row is fatal");
  cmd->add_option("--max-diagnostics", o.max_diagnostics, "Cap on reported per-line problems")
      ->capture_default_str();
  cmd->fallthrough();  // lets the root --config appear after the subcommand name
}

std::optional<PeriodKey> parse_period_flag(const std::string& text, const char* flag,
                                           Granularity granularity) {
  if (text.empty()) return std::nullopt;
  const auto key = PeriodKey::parse(text);
  if (!key) {
    throw UsageError(std::string(flag) + ": invalid period \"" + text + "\"");
  }
  if (granularity == Granularity::year && key->month) {
    throw UsageError(std::string(flag) + ": bare year expected under year granularity");
  }
  if (granularity == Granularity::month && !key->month) {
    throw UsageError(std::string(flag) + ": YEAR-MM expected under month granularity");
  }
  return key;
}

unsigned effective_threads(const IngestOpts& o) {
  if (o.deterministic) return 1;
  if (o.threads != 0) return o.threads;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

TrajectoryConfig make_config(const IngestOpts& io, const std::string& weight_spec,
                             const std::string& mode_str, std::uint64_t min_records) {
  TrajectoryConfig cfg;
  const auto scheme = WeightScheme::parse(weight_spec);
  if (!scheme) {
    throw UsageError("--weight: invalid scheme \"" + weight_spec +
                     "\" (expected unweighted, citations, citations-window:N with N >= 1, "
                     "or custom:NAME)");
  }
  cfg.scheme = *scheme;
  const auto mode = parse_centroid_mode(mode_str);
  if (!mode) throw UsageError("--mode: expected planar or spherical");
  cfg.mode = *mode;
  const auto granularity = parse_granularity(io.granularity);
  if (!granularity) throw UsageError("--granularity: expected year or month");
  cfg.granularity = *granularity;
  cfg.min_records = min_records;
  cfg.from = parse_period_flag(io.from, "--from", cfg.granularity);
  cfg.to = parse_period_flag(io.to, "--to", cfg.granularity);
  if (cfg.from && cfg.to && *cfg.to < *cfg.from) {
    throw UsageError("--from is after --to");
  }
  cfg.threads = effective_threads(io);
  cfg.strict = io.strict;
  cfg.max_diagnostics = io.max_diagnostics;
  return cfg;
}

OrgRegistry load_registry_checked(const std::string& path, bool strict, std::size_t cap) {
  RegistryLoadOptions options;
  options.strict = strict;
  RegistryLoadReport report;
  OrgRegistry registry = load_registry_file(path, options, &report);
  std::size_t shown = 0;
  for (const RegistryRowError& e : report.errors) {
    if (shown == cap) break;
    std::cerr << "warning: " << path << ":" << e.line << ": " << e.message << "\n";
    ++shown;
  }
  if (report.errors.size() > shown) {
    std::cerr << "warning: " << (report.errors.size() - shown)
              << " more registry rows rejected\n";
  }
  return registry;
}

void report_diagnostics(const std::string& path, const TrajectoryResult& result) {
  for (const Diagnostic& d : result.diagnostics) {
    std::cerr << "warning: " << path << ":" << d.line << ": " << d.message << "\n";
  }
  if (result.counters.diagnostics_suppressed != 0) {
    std::cerr << "warning: " << result.counters.diagnostics_suppressed
              << " more problems suppressed\n";
  }
}

void write_output(const std::string& path, const std::function<void(std::ostream&)>& emit) {
  if (path.empty() || path == "-") {
    emit(std::cout);
    std::cout.flush();
    if (!std::cout) throw std::runtime_error("write to standard output failed");
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out.is_open()) throw std::runtime_error("cannot write output: " + path);
  emit(out);
  out.flush();
  if (!out) throw std::runtime_error("write failed: " + path);
}

long long elapsed_ms(Clock::time_point t0) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - t0).count();
}

void print_summary(const RunCounters& c, std::uint64_t contributing, std::size_t periods,
                   std::size_t points, Clock::time_point t0) {
  std::cerr << "records: " << c.records_read << " read, " << contributing << " contributing, "
            << c.parse_errors << " malformed, " << c.unresolvable << " unresolvable, "
            << c.zero_weight << " zero-weight, " << c.undated << " undated, "
            << c.filtered_out << " outside window\n";
  if (c.missing_weight_input != 0) {
    std::cerr << "records: " << c.missing_weight_input << " lacked the weighting input\n";
  }
  if (c.degenerate_spherical != 0) {
    std::cerr << "records: " << c.degenerate_spherical
              << " skipped with a degenerate spherical mean\n";
  }
  std::cerr << "periods: " << periods << " seen, " << points << " trajectory points\n";
  std::cerr << "wall time: " << elapsed_ms(t0) << " ms\n";
}

int run_compute(const IngestOpts& io, const ComputeOpts& co) {
  const auto t0 = Clock::now();
  const TrajectoryConfig cfg = make_config(io, co.weight, co.mode, co.min_records);

  const OrgRegistry registry = load_registry_checked(io.registry, io.strict, io.max_diagnostics);
  FileLineReader pubs(io.pubs);
  const TrajectoryResult result = build_trajectory(pubs, registry, cfg);
  if (result.aborted) {
    const Diagnostic& d = result.diagnostics.front();
    std::cerr << "geocentroid: error: " << io.pubs << ":" << d.line << ": " << d.message
              << "\n";
    return 1;
  }
  report_diagnostics(io.pubs, result);

  ExportMeta meta;
  meta.scheme = cfg.scheme.to_string();
  meta.mode = std::string(to_string(cfg.mode));
  meta.granularity = std::string(to_string(cfg.granularity));
  meta.min_records = cfg.min_records;
  meta.version = kToolVersion;

  write_output(co.out, [&](std::ostream& out) {
    if (co.format == "csv") {
      write_points_csv(result.points, out);
    } else if (co.format == "geojson") {
      write_geojson(result.points, meta, out);
    } else {
      RenderOptions render;
      render.width = co.width;
      render.height = co.height;
      render.show_labels = co.labels;
      render.label_every = co.label_every;
      if (!co.base_map.empty()) render.base_map_path = co.base_map;
      render_svg(result.points, render, out);
    }
  });
  if (!co.stats_out.empty()) {
    write_output(co.stats_out, [&](std::ostream& out) { write_stats_csv(result.stats, out); });
  }

  print_summary(result.counters, result.counters.contributing, result.stats.size(),
                result.points.size(), t0);
  return 0;
}

int run_stats(const IngestOpts& io, const StatsOpts& so) {
  const auto t0 = Clock::now();
  const TrajectoryConfig cfg = make_config(io, "unweighted", "planar", 0);

  const OrgRegistry registry = load_registry_checked(io.registry, io.strict, io.max_diagnostics);
  FileLineReader pubs(io.pubs);
  const TrajectoryResult result = period_counts(pubs, registry, cfg);
  if (result.aborted) {
    const Diagnostic& d = result.diagnostics.front();
    std::cerr << "geocentroid: error: " << io.pubs << ":" << d.line << ": " << d.message
              << "\n";
    return 1;
  }
  report_diagnostics(io.pubs, result);

  write_output(so.out, [&](std::ostream& out) { write_stats_csv(result.stats, out); });

  std::uint64_t contributing = 0;
  for (const PeriodStats& s : result.stats) contributing += s.n_records_contributing;
  print_summary(result.counters, contributing, result.stats.size(), 0, t0);
  return 0;
}

bool is_blank(std::string_view line) {
  return line.find_first_not_of(" \t") == std::string_view::npos;
}

int run_validate(const ValidateOpts& vo) {
  const auto t0 = Clock::now();
  std::uint64_t records = 0;
  std::uint64_t invalid = 0;
  std::size_t shown = 0;
  std::uint64_t suppressed = 0;
  {
    FileLineReader in(vo.pubs);
    const ParseLimits limits;
    std::string line;
    std::string error;
    while (in.next(line)) {
      if (is_blank(line)) continue;
      ++records;
      if (!parse_record(line, limits, error)) {
        ++invalid;
        if (shown < vo.max_diagnostics) {
          std::cout << vo.pubs << ":" << in.line_number() << ": " << error << "\n";
          ++shown;
        } else {
          ++suppressed;
        }
      }
    }
  }
  std::cerr << "publications: " << records << " records, " << (records - invalid)
            << " valid, " << invalid << " invalid\n";

  std::size_t registry_rejected = 0;
  if (!vo.registry.empty()) {
    RegistryLoadReport report;
    load_registry_file(vo.registry, {}, &report);
    for (const RegistryRowError& e : report.errors) {
      if (shown < vo.max_diagnostics) {
        std::cout << vo.registry << ":" << e.line << ": " << e.message << "\n";
        ++shown;
      } else {
        ++suppressed;
      }
    }
    registry_rejected = report.rejected;
    std::cerr << "registry: " << report.rows_total << " rows, " << report.accepted
              << " accepted, " << report.rejected << " rejected\n";
  }
  if (suppressed != 0) {
    std::cerr << suppressed << " more problems suppressed\n";
  }
  std::cerr << "wall time: " << elapsed_ms(t0) << " ms\n";
  return (invalid != 0 || registry_rejected != 0) ? 1 : 0;
}

std::pair<PeriodKey, std::uint64_t> parse_plan_entry(const std::string& text) {
  const std::size_t colon = text.rfind(':');
  if (colon == std::string::npos || colon == 0 || colon + 1 == text.size()) {
    throw UsageError("--plan: expected PERIOD:COUNT, got \"" + text + "\"");
  }
  const auto period = PeriodKey::parse(std::string_view(text).substr(0, colon));
  if (!period) {
    throw UsageError("--plan: invalid period in \"" + text + "\"");
  }
  std::uint64_t count = 0;
  const char* b = text.data() + colon + 1;
  const char* e = text.data() + text.size();
  const auto res = std::from_chars(b, e, count);
  if (res.ec != std::errc{} || res.ptr != e) {
    throw UsageError("--plan: invalid count in \"" + text + "\"");
  }
  return {*period, count};
}

int run_synth(const SynthOpts& so) {
  SynthConfig cfg;
  cfg.seed = so.seed;
  cfg.org_pool = so.orgs;
  cfg.authors_min = so.authors_min;
  cfg.authors_max = so.authors_max;
  cfg.orgs_min = so.orgs_min;
  cfg.orgs_max = so.orgs_max;
  cfg.cite_min = so.cite_min;
  cfg.cite_max = so.cite_max;
  if (!so.org_list.empty()) cfg.org_list_path = so.org_list;
  cfg.plan.reserve(so.plan.size());
  for (const std::string& entry : so.plan) cfg.plan.push_back(parse_plan_entry(entry));
  if (const auto problem = validate_synth_config(cfg)) {
    throw UsageError("synth: " + *problem);
  }

  const SynthSummary summary = generate_synthetic(cfg, so.registry, so.pubs);
  std::cerr << "synth: " << summary.organizations << " organizations -> " << so.registry
            << "; " << summary.publications << " publications -> " << so.pubs << " (seed "
            << so.seed << ")\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weighted geographic centroids of research output over time"};
  app.set_version_flag("--version", geocentroid::kToolVersion);
  app.require_subcommand(1);

  IngestOpts compute_io;
  ComputeOpts co;
  CLI::App* compute =
      app.add_subcommand("compute", "Stream publications into a centroid trajectory");
  add_ingest_flags(compute, compute_io);
  compute->add_option("-w,--weight", co.weight,
                      "unweighted | citations | citations-window:N | custom:NAME")
      ->capture_default_str();
  compute->add_option("-m,--mode", co.mode, "Averaging mode")
      ->check(CLI::IsMember({"planar", "spherical"}))
      ->capture_default_str();
  compute->add_option("--min-records", co.min_records,
                      "Contributing records needed before a point is marked robust")
      ->capture_default_str();
  compute->add_option("-f,--format", co.format, "Output format")
      ->check(CLI::IsMember({"csv", "geojson", "svg"}))
      ->capture_default_str();
  compute->add_option("-o,--out", co.out, "Output path (default: standard output)")
      ->envname("GEOCENTROID_OUT");
  compute->add_option("--stats-out", co.stats_out, "Also write per-period counts CSV here");
  compute->add_option("--width", co.width, "SVG width in pixels")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  compute->add_option("--height", co.height, "SVG height in pixels")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  compute->add_flag("--labels", co.labels, "Label periods on the SVG map");
  compute->add_option("--label-every", co.label_every, "Label every k-th point")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  compute->add_option("--base-map", co.base_map, "GeoJSON outline drawn under the SVG");

  IngestOpts stats_io;
  StatsOpts so;
  CLI::App* stats =
      app.add_subcommand("stats", "Per-period record counts, no centroid computation");
  add_ingest_flags(stats, stats_io);
  stats->add_option("-o,--out", so.out, "Output path (default: standard output)")
      ->envname("GEOCENTROID_OUT");

  ValidateOpts vo;
  CLI::App* validate =
      app.add_subcommand("validate", "Parse-only pass; reports every malformed row");
  validate->add_option("-p,--pubs", vo.pubs, "Publications file to check")
      ->envname("GEOCENTROID_PUBS")
      ->required();
  validate->add_option("-r,--registry", vo.registry, "Registry CSV to check as well")
      ->envname("GEOCENTROID_REGISTRY");
  validate->add_option("--max-diagnostics", vo.max_diagnostics,
                       "Cap on reported per-line problems")
      ->capture_default_str();
  validate->fallthrough();

  SynthOpts sy;
  CLI::App* synth = app.add_subcommand("synth", "Generate a seeded synthetic dataset");
  synth->add_option("-r,--registry", sy.registry, "Registry CSV to write")->required();
  synth->add_option("-p,--pubs", sy.pubs, "Publications JSONL to write")->required();
  synth->add_option("--plan", sy.plan, "PERIOD:COUNT, repeatable, e.g. 2020-01:289")
      ->required();
  synth->add_option("--seed", sy.seed, "RNG seed")->capture_default_str();
  synth->add_option("--orgs", sy.orgs, "Organization pool size")->capture_default_str();
  synth->add_option("--authors-min", sy.authors_min, "Fewest authors per publication")
      ->capture_default_str();
  synth->add_option("--authors-max", sy.authors_max, "Most authors per publication")
      ->capture_default_str();
  synth->add_option("--orgs-min", sy.orgs_min, "Fewest organizations per author")
      ->capture_default_str();
  synth->add_option("--orgs-max", sy.orgs_max, "Most organizations per author")
      ->capture_default_str();
  synth->add_option("--cite-min", sy.cite_min, "Smallest citation count")
      ->capture_default_str();
  synth->add_option("--cite-max", sy.cite_max, "Largest citation count")
      ->capture_default_str();
  synth->add_option("--org-list", sy.org_list,
                    "File with one latitude,longitude pair per line instead of random "
                    "coordinates");
  synth->fallthrough();

  app.set_config("--config", "",
                 "key=value file; put options under a [subcommand] section, explicit "
                 "flags win");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (compute->parsed()) return run_compute(compute_io, co);
    if (stats->parsed()) return run_stats(stats_io, so);
    if (validate->parsed()) return run_validate(vo);
    if (synth->parsed()) return run_synth(sy);
  } catch (const UsageError& e) {
    std::cerr << "geocentroid: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "geocentroid: error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
