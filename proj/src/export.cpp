#include "geocentroid/export.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "geocentroid/num_format.hpp"

namespace geocentroid {

namespace {

constexpr const char* kPointsHeader = "period,latitude,longitude,n_pubs,total_weight,robust";
constexpr const char* kStatsHeader = "period,total,contributing,skipped";

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

double parse_csv_double(const std::string& field, std::size_t line, const char* what) {
  double v = 0.0;
  const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
  if (res.ec != std::errc{} || res.ptr != field.data() + field.size()) {
    throw std::runtime_error("trajectory CSV line " + std::to_string(line) + ": invalid " +
                             what + " \"" + field + "\"");
  }
  return v;
}

std::uint64_t parse_csv_u64(const std::string& field, std::size_t line, const char* what) {
  std::uint64_t v = 0;
  const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
  if (res.ec != std::errc{} || res.ptr != field.data() + field.size()) {
    throw std::runtime_error("trajectory CSV line " + std::to_string(line) + ": invalid " +
                             what + " \"" + field + "\"");
  }
  return v;
}

bool crosses_antimeridian(std::span<const TrajectoryPoint> points) {
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (std::abs(points[i].longitude - points[i - 1].longitude) > 180.0) return true;
  }
  return false;
}

}  // namespace

void write_points_csv(std::span<const TrajectoryPoint> points, std::ostream& out) {
  out << kPointsHeader << '\n';
  for (const TrajectoryPoint& p : points) {
    out << p.period.to_string() << ',' << format_fixed(p.latitude, 6) << ','
        << format_fixed(p.longitude, 6) << ',' << p.n_pubs << ','
        << format_shortest(p.total_weight) << ',' << (p.robust ? "true" : "false") << '\n';
  }
}

void write_stats_csv(std::span<const PeriodStats> stats, std::ostream& out) {
  out << kStatsHeader << '\n';
  for (const PeriodStats& s : stats) {
    out << s.period.to_string() << ',' << s.n_records_total << ',' << s.n_records_contributing
        << ',' << s.n_records_skipped << '\n';
  }
}

std::vector<TrajectoryPoint> read_points_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kPointsHeader) {
    throw std::runtime_error("trajectory CSV: missing or unexpected header");
  }
  std::vector<TrajectoryPoint> points;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split_fields(line);
    if (fields.size() != 6) {
      throw std::runtime_error("trajectory CSV line " + std::to_string(line_no) +
                               ": expected 6 fields, got " + std::to_string(fields.size()));
    }
    TrajectoryPoint p;
    const auto period = PeriodKey::parse(fields[0]);
    if (!period) {
      throw std::runtime_error("trajectory CSV line " + std::to_string(line_no) +
                               ": invalid period \"" + fields[0] + "\"");
    }
    p.period = *period;
    p.latitude = parse_csv_double(fields[1], line_no, "latitude");
    p.longitude = parse_csv_double(fields[2], line_no, "longitude");
    p.n_pubs = parse_csv_u64(fields[3], line_no, "n_pubs");
    p.total_weight = parse_csv_double(fields[4], line_no, "total_weight");
    if (fields[5] == "true") {
      p.robust = true;
    } else if (fields[5] == "false") {
      p.robust = false;
    } else {
      throw std::runtime_error("trajectory CSV line " + std::to_string(line_no) +
                               ": invalid robust flag \"" + fields[5] + "\"");
    }
    points.push_back(std::move(p));
  }
  return points;
}

void write_geojson(std::span<const TrajectoryPoint> points, const ExportMeta& meta,
                   std::ostream& out) {
  using nlohmann::json;

  json features = json::array();
  for (const TrajectoryPoint& p : points) {
    features.push_back({
        {"type", "Feature"},
        {"geometry", {{"type", "Point"}, {"coordinates", {p.longitude, p.latitude}}}},
        {"properties",
         {{"period", p.period.to_string()},
          {"n_pubs", p.n_pubs},
          {"total_weight", p.total_weight},
          {"robust", p.robust}}},
    });
  }
  if (points.size() >= 2) {
    json coords = json::array();
    for (const TrajectoryPoint& p : points) {
      coords.push_back({p.longitude, p.latitude});
    }
    features.push_back({
        {"type", "Feature"},
        {"geometry", {{"type", "LineString"}, {"coordinates", std::move(coords)}}},
        {"properties",
         {{"role", "trajectory"}, {"crosses_antimeridian", crosses_antimeridian(points)}}},
    });
  }

  const json doc = {
      {"type", "FeatureCollection"},
      {"properties",
       {{"generator", "geocentroid"},
        {"version", meta.version},
        {"scheme", meta.scheme},
        {"mode", meta.mode},
        {"granularity", meta.granularity},
        {"min_records", meta.min_records}}},
      {"features", std::move(features)},
  };
  out << doc.dump(2) << '\n';
}

namespace {

struct Projector {
  double width;
  double height;

  double x(double longitude) const { return (longitude + 180.0) / 360.0 * width; }
  double y(double latitude) const { return (90.0 - latitude) / 180.0 * height; }
};

void append_base_map_position(const nlohmann::json& pos, const Projector& proj, bool first,
                              std::string& d) {
  if (!pos.is_array() || pos.size() < 2 || !pos[0].is_number() || !pos[1].is_number()) {
    throw std::runtime_error("base map: positions must be [longitude, latitude] arrays");
  }
  d += first ? 'M' : 'L';
  d += format_fixed(proj.x(pos[0].get<double>()), 2);
  d += ' ';
  d += format_fixed(proj.y(pos[1].get<double>()), 2);
}

void append_base_map_line(const nlohmann::json& coords, const Projector& proj, bool close,
                          std::string& d) {
  if (!coords.is_array()) {
    throw std::runtime_error("base map: coordinates must be arrays");
  }
  bool first = true;
  for (const auto& pos : coords) {
    append_base_map_position(pos, proj, first, d);
    first = false;
  }
  if (close && !coords.empty()) d += 'Z';
}

void append_base_map_geometry(const nlohmann::json& geom, const Projector& proj,
                              std::string& d) {
  if (!geom.is_object() || !geom.contains("type") || !geom["type"].is_string()) {
    throw std::runtime_error("base map: geometry without a type");
  }
  const std::string type = geom["type"].get<std::string>();
  if (type == "GeometryCollection") {
    if (!geom.contains("geometries") || !geom["geometries"].is_array()) {
      throw std::runtime_error("base map: GeometryCollection without geometries");
    }
    for (const auto& g : geom["geometries"]) append_base_map_geometry(g, proj, d);
    return;
  }
  if (type == "Point" || type == "MultiPoint") return;  // nothing to outline
  if (!geom.contains("coordinates") || !geom["coordinates"].is_array()) {
    throw std::runtime_error("base map: geometry without coordinates");
  }
  const auto& coords = geom["coordinates"];
  if (type == "LineString") {
    append_base_map_line(coords, proj, false, d);
  } else if (type == "Polygon") {
    for (const auto& ring : coords) append_base_map_line(ring, proj, true, d);
  } else if (type == "MultiLineString") {
    for (const auto& line : coords) append_base_map_line(line, proj, false, d);
  } else if (type == "MultiPolygon") {
    for (const auto& poly : coords) {
      if (!poly.is_array()) throw std::runtime_error("base map: malformed MultiPolygon");
      for (const auto& ring : poly) append_base_map_line(ring, proj, true, d);
    }
  } else {
    throw std::runtime_error("base map: unsupported geometry type \"" + type + "\"");
  }
}

std::string base_map_path_data(const std::string& path, const Projector& proj) {
  std::ifstream in(path, std::ios::binary);
  if (!in.is_open()) {
    throw std::runtime_error("cannot open base map file: " + path);
  }
  const nlohmann::json doc = nlohmann::json::parse(in, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded()) {
    throw std::runtime_error("base map " + path + ": invalid JSON");
  }
  std::string d;
  if (doc.is_object() && doc.value("type", "") == "FeatureCollection") {
    if (!doc.contains("features") || !doc["features"].is_array()) {
      throw std::runtime_error("base map " + path + ": FeatureCollection without features");
    }
    for (const auto& f : doc["features"]) {
      if (!f.is_object() || !f.contains("geometry")) {
        throw std::runtime_error("base map " + path + ": feature without geometry");
      }
      if (f["geometry"].is_null()) continue;
      append_base_map_geometry(f["geometry"], proj, d);
    }
  } else if (doc.is_object() && doc.value("type", "") == "Feature") {
    append_base_map_geometry(doc.at("geometry"), proj, d);
  } else {
    append_base_map_geometry(doc, proj, d);
  }
  return d;
}

}  // namespace

void render_svg(std::span<const TrajectoryPoint> points, const RenderOptions& options,
                std::ostream& out) {
  if (options.width <= 0 || options.height <= 0) {
    throw std::runtime_error("SVG viewport must have positive width and height");
  }
  const Projector proj{static_cast<double>(options.width), static_cast<double>(options.height)};

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << options.width << "\" height=\""
      << options.height << "\" viewBox=\"0 0 " << options.width << ' ' << options.height
      << "\">\n";
  out << "<rect width=\"" << options.width << "\" height=\"" << options.height
      << "\" fill=\"#ffffff\"/>\n";

  if (options.base_map_path) {
    const std::string d = base_map_path_data(*options.base_map_path, proj);
    if (!d.empty()) {
      out << "<path d=\"" << d
          << "\" fill=\"none\" stroke=\"#c8c8c8\" stroke-width=\"0.5\"/>\n";
    }
  }

  if (points.size() >= 2) {
    out << "<path d=\"";
    for (std::size_t i = 0; i < points.size(); ++i) {
      out << (i == 0 ? 'M' : 'L') << format_fixed(proj.x(points[i].longitude), 2) << ' '
          << format_fixed(proj.y(points[i].latitude), 2);
    }
    out << "\" fill=\"none\" stroke=\"#555555\" stroke-width=\"1\"/>\n";
  }

  for (const TrajectoryPoint& p : points) {
    out << "<circle cx=\"" << format_fixed(proj.x(p.longitude), 2) << "\" cy=\""
        << format_fixed(proj.y(p.latitude), 2) << "\" r=\"3\" fill=\""
        << (p.robust ? options.robust_color : options.nonrobust_color) << "\"/>\n";
  }

  if (options.show_labels) {
    const std::size_t every = options.label_every > 0 ? options.label_every : 1;
    for (std::size_t i = 0; i < points.size(); i += every) {
      const TrajectoryPoint& p = points[i];
      out << "<text x=\"" << format_fixed(proj.x(p.longitude) + 5.0, 2) << "\" y=\""
          << format_fixed(proj.y(p.latitude) - 5.0, 2)
          << "\" font-family=\"sans-serif\" font-size=\"10\" fill=\"#333333\">"
          << p.period.to_string() << "</text>\n";
    }
  }

  out << "</svg>\n";
}

}  // namespace geocentroid
