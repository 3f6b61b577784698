#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "geocentroid/trajectory.hpp"

namespace geocentroid {

/// Run description embedded in GeoJSON output so a file records how it was
/// produced.
struct ExportMeta {
  std::string scheme;
  std::string mode;
  std::string granularity;
  std::uint64_t min_records = 0;
  std::string version;
};

/// Header `period,latitude,longitude,n_pubs,total_weight,robust`; coordinates
/// with 6 decimal places, total_weight in shortest round-trip form.
void write_points_csv(std::span<const TrajectoryPoint> points, std::ostream& out);

/// Header `period,total,contributing,skipped`.
void write_stats_csv(std::span<const PeriodStats> stats, std::ostream& out);

/// Parses a CSV produced by write_points_csv. Throws std::runtime_error on a
/// header or field mismatch. write_points_csv(read_points_csv(x)) == x.
std::vector<TrajectoryPoint> read_points_csv(std::istream& in);

/// FeatureCollection with one Point feature per trajectory point and, for two
/// or more points, a LineString through them in chronological order.
/// Coordinates are [longitude, latitude]. The LineString carries a
/// crosses_antimeridian property (true when consecutive points jump by more
/// than 180 degrees of longitude); the collection-level properties member
/// records the run metadata.
void write_geojson(std::span<const TrajectoryPoint> points, const ExportMeta& meta,
                   std::ostream& out);

struct RenderOptions {
  int width = 1000;
  int height = 500;
  bool show_labels = false;
  int label_every = 10;  // label every k-th point when show_labels is set
  std::optional<std::string> base_map_path;  // world-outline GeoJSON drawn beneath
  std::string robust_color = "#d62728";
  std::string nonrobust_color = "#9e9e9e";
};

/// Self-contained SVG map: equirectangular projection (x linear in longitude,
/// y linear in negative latitude), a path through the points and one circle
/// marker per point, grey or red by robustness. Output is byte-deterministic
/// for fixed inputs. Throws std::runtime_error when the base map file is
/// missing or malformed.
void render_svg(std::span<const TrajectoryPoint> points, const RenderOptions& options,
                std::ostream& out);

}  // namespace geocentroid
