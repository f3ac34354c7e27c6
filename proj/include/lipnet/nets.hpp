// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lipnet/family.hpp"
#include "lipnet/geometry.hpp"
#include "lipnet/pointset.hpp"

namespace lipnet {

/// Separation a and density radius b of an (a,b)-net.
struct NetParams {
  double a = 1.0;
  double b = 2.0;

  /// Throws PreconditionError unless 0 < a <= 2b and both are finite.
  void validate() const;
};

/// Tolerance applied to separation tests on constructed point sets.
inline constexpr double kSeparationTolerance = 1e-12;

/// Default cap on dim * (radius / mesh)^dim for candidate pools.
inline constexpr double kDefaultCandidateBudget = 5e7;

/// Radial projections onto the radius-sphere of all lattice points (spacing `mesh`)
/// whose norm is within `mesh` of `radius`. Duplicates are merged and the result is
/// sorted lexicographically.
std::vector<Vector> sphere_candidates(std::size_t dim, NormKind kind, double radius, double mesh,
                                      double budget = kDefaultCandidateBudget);

/// Largest distance from `samples` random sphere points to the nearest candidate.
double candidate_covering_radius(const std::vector<Vector>& candidates, double radius,
                                 std::size_t samples, std::uint64_t seed);

/// Seeds followed by the candidates (in the given order) that keep distance >= a
/// from everything accepted so far.
std::vector<Vector> greedy_separated(const std::vector<Vector>& candidates, double a,
                                     const std::vector<Vector>& seeds);

/// A base point: the origin (radius 0) or the point (radius / 2^k) * S_{2^k}[index]
/// with k = floor(log2(radius)).
struct BasePoint {
  int radius = 0;
  std::size_t index = 0;

  auto operator<=>(const BasePoint&) const = default;
};

/// floor(log2(m)) for m >= 1.
int floor_log2(int m);
bool is_power_of_two(int m);

struct BaseBuildOptions {
  double budget = kDefaultCandidateBudget;
  std::size_t covering_samples = 2000;
  std::uint64_t seed = 1;
};

/// Dyadic sphere layers S_1, S_2, S_4, ..., S_{2^K} with 2 S_{2^k} contained in S_{2^{k+1}}
/// (stored as a prefix). Intermediate shells are radial rescalings.
class SpiderwebBase {
 public:
  SpiderwebBase(std::size_t dim, NormKind kind, NetParams params,
                std::vector<std::vector<Vector>> dyadic_layers, double mesh = 0.0,
                double covering_radius = 0.0);

  [[nodiscard]] std::size_t dim() const { return dim_; }
  [[nodiscard]] NormKind kind() const { return kind_; }
  [[nodiscard]] const NetParams& params() const { return params_; }
  [[nodiscard]] int max_level() const { return static_cast<int>(layers_.size()) - 1; }
  /// Radius of the materialized point set, 2^K.
  [[nodiscard]] int max_radius() const { return 1 << max_level(); }
  /// Largest shell index available through layer(): 2^{K+1} - 1.
  [[nodiscard]] int max_layer() const { return (2 << max_level()) - 1; }
  [[nodiscard]] const std::vector<Vector>& dyadic_layer(int k) const { return layers_.at(k); }
  [[nodiscard]] const std::vector<std::vector<Vector>>& dyadic_layers() const { return layers_; }
  [[nodiscard]] double mesh() const { return mesh_; }
  /// Measured covering radius of the candidate pools used to build the layers (0 if unknown).
  [[nodiscard]] double covering_radius() const { return covering_; }

  /// S_m for 1 <= m <= max_layer().
  [[nodiscard]] std::vector<Vector> layer(int m) const;
  [[nodiscard]] Vector point(BasePoint p) const;
  /// Every base point with radius <= max_radius, origin first, then by shell.
  [[nodiscard]] std::vector<BasePoint> points(int max_radius) const;
  [[nodiscard]] std::vector<BasePoint> points() const { return points(max_radius()); }

  /// For k >= 1: index in S_{2^{k-1}} of the point of 2 S_{2^{k-1}} nearest to S_{2^k}[j].
  [[nodiscard]] std::size_t dyadic_parent(int k, std::size_t j) const { return parents_.at(k).at(j); }

 private:
  std::size_t dim_;
  NormKind kind_;
  NetParams params_;
  std::vector<std::vector<Vector>> layers_;
  std::vector<std::vector<std::size_t>> parents_;
  double mesh_;
  double covering_;
};

/// Builds S_1 greedily from the unit-sphere candidates, then each S_{2^{k+1}} greedily from
/// the candidates of radius 2^{k+1} seeded with 2 S_{2^k}. Requires 0 < a < 2.
SpiderwebBase build_spiderweb_base(std::size_t dim, NormKind kind, double a, int max_level,
                                   double mesh, const BaseBuildOptions& options = {});

/// S_m as a free function.
std::vector<Vector> layer(const SpiderwebBase& base, int m);

/// A net containing a spiderweb base: the base shells plus extra points.
struct Spiderweb {
  std::shared_ptr<const SpiderwebBase> base;
  std::vector<Vector> extra_points;
  NetParams params;
  /// Points of norm above this radius are outside the truncation.
  int radius = 0;

  /// Base points up to `radius` (origin first) followed by the extra points.
  [[nodiscard]] std::vector<Vector> all_points() const;
};

enum class RegionKind { Sphere, Ball, Box };

struct RegionSampler {
  RegionKind kind = RegionKind::Ball;
  std::size_t dim = 1;
  NormKind norm = NormKind::L2;
  double radius = 1.0;
  std::size_t count = 10000;
  std::uint64_t seed = 1;

  [[nodiscard]] std::vector<Vector> sample() const;
};

struct NetReport {
  double min_pairwise_distance = std::numeric_limits<double>::infinity();
  double max_sample_to_net_distance = 0.0;
  std::size_t closest_pair_first = 0;
  std::size_t closest_pair_second = 0;
  bool separated = true;
  bool dense = true;
  [[nodiscard]] bool pass() const { return separated && dense; }
};

/// Exact minimum pairwise distance of `points` plus the sampled density radius.
NetReport validate_net(const std::vector<Vector>& points, const RegionSampler& region,
                       const NetParams& params);

/// Exact minimum pairwise distance of a point set (infinity for fewer than two points),
/// with the achieving pair (smallest indices on ties).
struct SeparationResult {
  double distance = std::numeric_limits<double>::infinity();
  std::size_t first = 0;
  std::size_t second = 0;
};
SeparationResult min_pairwise_distance(const PointSet& points);

/// Seeded maximal a-separated subset of dense random samples of the radius ball.
/// Serves as a random (a, b)-net of that ball for b slightly above a.
std::vector<Vector> random_net(std::size_t dim, NormKind kind, double a, double radius,
                               std::uint64_t seed, std::size_t samples_per_unit_volume = 64);

/// A bijection between two finite point lists with its measured Lipschitz data.
struct LipschitzEquivalence {
  std::vector<Vector> domain;
  std::vector<Vector> codomain;
  /// forward[i] = index in codomain of F(domain[i]).
  std::vector<std::size_t> forward;
  double forward_lipschitz = 0.0;
  double backward_lipschitz = 0.0;

  [[nodiscard]] double distortion() const { return forward_lipschitz * backward_lipschitz; }
  [[nodiscard]] bool is_bijection() const;
  [[nodiscard]] LipschitzEquivalence inverse() const;
  /// Measures forward/backward constants exactly over all pairs.
  void measure();
};

struct SpiderwebTransfer {
  Spiderweb spiderweb;
  /// F from the rescaled net onto the spiderweb.
  LipschitzEquivalence equivalence;
  /// 1 / (3b).
  double scale = 1.0;
  double max_displacement = 0.0;
  /// Number of base points matched by the nearest point map.
  std::size_t matched = 0;
};

/// Rescales the net by 1/(3b), matches every base point with radius <= base_radius to its
/// nearest net point (lexicographic ties), and swaps matched net points for their base points.
/// Throws PreconditionError when the matching is not injective or the base does not cover.
SpiderwebTransfer net_to_spiderweb(const std::vector<Vector>& net, const NetParams& params,
                                   std::shared_ptr<const SpiderwebBase> base, int base_radius);

/// Conjugates the family by the equivalence: point i of the family becomes eq(point i).
/// The equivalence domain must be the family's point set.
RetractionFamily transport_basis(const LipschitzEquivalence& eq, const RetractionFamily& family);

}  // namespace lipnet
