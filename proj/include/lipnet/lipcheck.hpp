// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "lipnet/family.hpp"
#include "lipnet/nets.hpp"
#include "lipnet/pointset.hpp"

namespace lipnet {

/// Slack added to theoretical constants in every bound comparison.
inline constexpr double kBoundTolerance = 1e-9;

enum class LipMode { ExactPairwise, Sampled };

struct LipOptions {
  LipMode mode = LipMode::ExactPairwise;
  std::size_t samples = 100000;
  std::uint64_t seed = 1;
};

struct LipResult {
  double value = 0.0;
  /// Achieving pair (first < second); the smallest pair wins ties.
  std::size_t first = 0;
  std::size_t second = 0;
  std::size_t pairs = 0;
};

/// sup d(T x, T y) / d(x, y) where images.row(i) = T(points.row(i)).
/// Requires at least two points and equally sized sets.
LipResult lipschitz_norm(const PointSet& points, const PointSet& images, const LipOptions& options = {});

/// Same for a map evaluated on vectors.
LipResult lipschitz_norm(const std::vector<Vector>& points,
                         const std::function<Vector(const Vector&)>& map,
                         const LipOptions& options = {});

/// A failed or maximal instance: an index, a point pair and the observed value.
struct Witness {
  std::size_t index = 0;
  std::size_t first = 0;
  std::size_t second = 0;
  double value = 0.0;

  [[nodiscard]] bool before(const Witness& other) const {
    if (index != other.index) return index < other.index;
    if (first != other.first) return first < other.first;
    return second < other.second;
  }
};

struct AxiomCheck {
  std::string name;
  bool pass = true;
  /// Human readable mode or failure description.
  std::string detail;
  std::optional<Witness> witness;
};

struct FamilyLipschitz {
  double max = 0.0;
  Witness witness;
  std::vector<double> per_level;
  std::vector<Witness> per_level_witness;
  /// Filled only when the family is small enough for an unpruned sweep.
  std::vector<double> per_index;
  std::uint64_t pairs_evaluated = 0;
  bool pruned = false;
};

struct BoundEntry {
  std::string name;
  double measured = 0.0;
  double theoretical = 0.0;
  bool pass = true;
  /// Point (and parameter) achieving the measured value.
  std::size_t point = 0;
  long long parameter = 0;
};

struct CertReport {
  std::size_t point_count = 0;
  std::size_t level_count = 0;
  std::vector<AxiomCheck> axioms;
  FamilyLipschitz lipschitz;
  std::vector<BoundEntry> bounds;
  std::vector<std::string> skipped;

  [[nodiscard]] bool pass() const;
  [[nodiscard]] const AxiomCheck* axiom(const std::string& name) const;
  [[nodiscard]] const BoundEntry* bound(const std::string& name) const;
};

struct CertOptions {
  /// Unpruned per-index sweep when levels * N^2 stays below this.
  std::uint64_t per_index_budget = 20'000'000;
  /// Literal commutation check (all index pairs times all points) when below this.
  std::uint64_t naive_commutation_budget = 10'000'000;
  /// Index pairs drawn for the literal check above its budget (0 disables it).
  std::size_t commutation_subsample = 0;
  std::uint64_t seed = 1;
};

/// Exact Lipschitz constants of every phi_index. The per-level maxima are exact; the search
/// prunes pairs whose triangle-inequality bound already falls strictly below the running max.
FamilyLipschitz family_lipschitz(const RetractionFamily& family, const CertOptions& options = {});

/// (1) image equals the prefix and fixes it pointwise, (2) the union covers the set,
/// (3) every constant is at most the family bound, (4) phi_m o phi_n = phi_min(m,n).
CertReport check_retractional_axioms(const RetractionFamily& family, const CertOptions& options = {});

/// Commutation through per-point trajectories: exact for every index pair and point.
AxiomCheck check_commutation(const RetractionFamily& family);

/// Commutation by literal evaluation over all index pairs, or over `subsample` seeded pairs.
AxiomCheck check_commutation_naive(const RetractionFamily& family, std::size_t subsample = 0,
                                   std::uint64_t seed = 1);

/// Image and fixed-point axioms, evaluated through the branch thresholds of each level.
AxiomCheck check_image_axiom(const RetractionFamily& family);

/// max over i < count of gap(i) against bound + kBoundTolerance; `parameter` reports the
/// parameter at which gap(i) was attained if the callback sets it. The callback runs
/// concurrently and must be thread-safe.
BoundEntry check_bound(const std::string& name, std::size_t count,
                       const std::function<double(std::size_t, long long&)>& gap, double bound);

struct GriddabilityReport {
  double min_pairwise_distance = std::numeric_limits<double>::infinity();
  double max_sample_distance = 0.0;
  double separation_target = 0.0;
  double density_target = 0.0;
  std::size_t grid_points = 0;
  std::size_t samples = 0;
  bool separated = false;
  bool dense = false;
  [[nodiscard]] bool pass() const { return separated && dense; }
};

/// Builds the product grid of per-block nets under the space's ambient norm, checks exact
/// separation against the smallest block a and density of samples from the product of
/// the block balls (radius `radius`) against the largest block b.
GriddabilityReport check_griddability(const BlockSpace& space,
                                      const std::vector<std::vector<Vector>>& block_nets,
                                      const std::vector<NetParams>& block_params, double radius,
                                      std::size_t samples, std::uint64_t seed);

}  // namespace lipnet
