#include "geocentroid/centroid.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace geocentroid {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;
constexpr double kRadToDeg = 180.0 / std::numbers::pi;
constexpr double kDegenerateNorm = 1e-12;

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;
};

Vec3 unit_vector(double lat_deg, double long_deg) {
  const double lat = lat_deg * kDegToRad;
  const double lon = long_deg * kDegToRad;
  const double c = std::cos(lat);
  return {c * std::cos(lon), c * std::sin(lon), std::sin(lat)};
}

}  // namespace

std::string_view to_string(CentroidMode mode) {
  return mode == CentroidMode::planar ? "planar" : "spherical";
}

std::optional<CentroidMode> parse_centroid_mode(std::string_view s) {
  if (s == "planar") return CentroidMode::planar;
  if (s == "spherical") return CentroidMode::spherical;
  return std::nullopt;
}

std::optional<PubCentroid> publication_centroid(const ResolvedPublication& pub,
                                                std::span<const ContributionWeight> weights,
                                                CentroidMode mode, double pub_weight) {
  PubCentroid out;
  out.pub_id = pub.pub_id;
  out.weight = pub_weight;

  // The weighted mean of a single location is that location; bypassing the
  // arithmetic keeps single-institution publications coordinate-exact in
  // both modes.
  if (weights.size() == 1) {
    out.latitude = weights[0].org->latitude;
    out.longitude = weights[0].org->longitude;
    return out;
  }

  if (mode == CentroidMode::planar) {
    double lat = 0.0, lon = 0.0;
    for (const ContributionWeight& w : weights) {
      lat += w.weight * w.org->latitude;
      lon += w.weight * w.org->longitude;
    }
    out.latitude = lat;
    out.longitude = lon;
    return out;
  }

  Vec3 mean;
  for (const ContributionWeight& w : weights) {
    const Vec3 v = unit_vector(w.org->latitude, w.org->longitude);
    mean.x += w.weight * v.x;
    mean.y += w.weight * v.y;
    mean.z += w.weight * v.z;
  }
  const double norm = std::sqrt(mean.x * mean.x + mean.y * mean.y + mean.z * mean.z);
  if (norm < kDegenerateNorm) return std::nullopt;
  out.latitude = std::atan2(mean.z, std::hypot(mean.x, mean.y)) * kRadToDeg;
  out.longitude = std::atan2(mean.y, mean.x) * kRadToDeg;
  return out;
}

void CentroidAccumulator::add(const PubCentroid& c) {
  if (c.weight == 0.0) {
    ++n_skipped_;
    return;
  }
  if (mode_ == CentroidMode::planar) {
    axis_[0].add(c.weight * c.latitude);
    axis_[1].add(c.weight * c.longitude);
  } else {
    const Vec3 v = unit_vector(c.latitude, c.longitude);
    axis_[0].add(c.weight * v.x);
    axis_[1].add(c.weight * v.y);
    axis_[2].add(c.weight * v.z);
  }
  weight_.add(c.weight);
  ++n_pubs_;
}

void CentroidAccumulator::merge(const CentroidAccumulator& other) {
  if (mode_ != other.mode_) {
    throw std::logic_error("cannot merge accumulators of different centroid modes");
  }
  for (int i = 0; i < 3; ++i) axis_[i].merge(other.axis_[i]);
  weight_.merge(other.weight_);
  n_pubs_ += other.n_pubs_;
  n_skipped_ += other.n_skipped_;
}

std::optional<CentroidAccumulator::Finalized> CentroidAccumulator::finalize() const {
  const double w = weight_.value();
  if (!(w > 0.0)) return std::nullopt;

  Finalized out;
  out.total_weight = w;
  out.n_pubs = n_pubs_;
  if (mode_ == CentroidMode::planar) {
    out.latitude = axis_[0].value() / w;
    out.longitude = axis_[1].value() / w;
    return out;
  }
  const double x = axis_[0].value();
  const double y = axis_[1].value();
  const double z = axis_[2].value();
  const double norm = std::sqrt(x * x + y * y + z * z);
  if (norm < kDegenerateNorm) return std::nullopt;
  out.latitude = std::atan2(z, std::hypot(x, y)) * kRadToDeg;
  out.longitude = std::atan2(y, x) * kRadToDeg;
  return out;
}

}  // namespace geocentroid
