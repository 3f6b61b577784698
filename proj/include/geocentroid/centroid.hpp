#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>

#include "geocentroid/kahan.hpp"
#include "geocentroid/weighting.hpp"

namespace geocentroid {

/// planar: arithmetic averaging of latitude/longitude in degrees.
/// spherical: averaging of 3D unit vectors on the sphere, immune to
/// antimeridian wraparound. Planar is the default; output metadata records
/// which mode produced a file.
enum class CentroidMode { planar, spherical };

std::string_view to_string(CentroidMode mode);
std::optional<CentroidMode> parse_centroid_mode(std::string_view s);

/// Centre of mass of a single publication, plus the scalar weight it carries
/// into the period average.
struct PubCentroid {
  std::string pub_id;
  double latitude = 0.0;
  double longitude = 0.0;
  double weight = 0.0;
};

/// Location of one publication as the weighted mean of its contributing
/// organizations. `weights` must be non-empty and sum to 1; `pub_weight` is
/// stamped into the result. In spherical mode a degenerate mean (vector
/// magnitude below 1e-12, e.g. perfectly antipodal inputs) yields nullopt and
/// the publication is skipped.
std::optional<PubCentroid> publication_centroid(const ResolvedPublication& pub,
                                                std::span<const ContributionWeight> weights,
                                                CentroidMode mode, double pub_weight);

/// Mergeable partial sums for one period. Single-writer; parallel runs give
/// each worker a private accumulator map and merge at end of input. All sums
/// are compensated.
class CentroidAccumulator {
 public:
  explicit CentroidAccumulator(CentroidMode mode = CentroidMode::planar) : mode_(mode) {}

  CentroidMode mode() const { return mode_; }

  /// Folds one publication centroid in. A zero-weight centroid only
  /// increments the skip counter.
  void add(const PubCentroid& c);

  /// Records a publication that could not produce a centroid at all
  /// (unresolvable or degenerate).
  void note_skipped() { ++n_skipped_; }

  /// Componentwise sums; counts add. Throws std::logic_error when the modes
  /// differ -- that is a programming error, not a data condition.
  void merge(const CentroidAccumulator& other);

  std::uint64_t pub_count() const { return n_pubs_; }
  std::uint64_t skipped_count() const { return n_skipped_; }
  double total_weight() const { return weight_.value(); }

  struct Finalized {
    double latitude = 0.0;
    double longitude = 0.0;
    double total_weight = 0.0;
    std::uint64_t n_pubs = 0;
  };

  /// Weighted mean over everything accumulated. Empty when the total weight
  /// is zero (the period is omitted from trajectories but still counted in
  /// statistics), or when a spherical mean degenerates.
  std::optional<Finalized> finalize() const;

 private:
  CentroidMode mode_;
  // planar: [0] = sum w*lat, [1] = sum w*long; spherical: sum of w*(x,y,z)
  KahanSum<double> axis_[3];
  KahanSum<double> weight_;
  std::uint64_t n_pubs_ = 0;
  std::uint64_t n_skipped_ = 0;
};

}  // namespace geocentroid
