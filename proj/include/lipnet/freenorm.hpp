// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "lipnet/family.hpp"
#include "lipnet/pointset.hpp"

namespace lipnet {

/// Largest |total mass| accepted as balanced.
inline constexpr double kMassTolerance = 1e-12;
/// Largest accepted gap between the primal cost and the dual bound.
inline constexpr double kDualityTolerance = 1e-8;

/// A finitely supported zero-mass measure over positions of an ordered point list.
struct Molecule {
  std::vector<std::size_t> support;
  std::vector<double> weights;

  /// Throws PreconditionError on size mismatch, repeated support or nonzero total mass.
  void validate() const;
  [[nodiscard]] bool empty() const { return support.empty(); }
  /// Same molecule scaled by t.
  [[nodiscard]] Molecule scaled(double t) const;
  /// Sum with another molecule, merging shared support and dropping zero weights.
  [[nodiscard]] Molecule plus(const Molecule& other) const;
};

/// delta_x - delta_y.
Molecule dipole(std::size_t x, std::size_t y);

struct Flow {
  std::size_t source = 0;
  std::size_t sink = 0;
  double mass = 0.0;
};

struct TransportPlan {
  std::vector<Flow> flows;
  double cost = 0.0;
};

struct FreeNormResult {
  /// Minimal transport cost.
  double value = 0.0;
  TransportPlan plan;
  /// Dual bound sum_q |w_q| g(q) - sum_p w_p g(p) from the final node potentials.
  double dual = 0.0;
  double gap = 0.0;
  /// max over source/sink pairs of g(q) - g(p) - d(p, q); <= 0 up to rounding when feasible.
  double dual_violation = 0.0;
  /// Dual potential per support point (same order as the molecule).
  std::vector<double> potentials;
};

using DistanceFn = std::function<double(std::size_t, std::size_t)>;

/// Free-space norm of mu by successive shortest paths with Dijkstra potentials on the
/// complete bipartite graph between its positive and negative parts.
FreeNormResult free_norm(const DistanceFn& distance, const Molecule& mu);
FreeNormResult free_norm(const PointSet& points, const Molecule& mu);
/// Pairwise distance matrix form.
FreeNormResult free_norm(const std::vector<std::vector<double>>& distances, const Molecule& mu);

/// Push-forward along phi_index: every delta_x becomes delta_{phi_index(x)}.
Molecule linearize(const RetractionFamily& family, std::size_t index, const Molecule& mu);

struct MoleculeSampler {
  std::size_t max_support = 8;
  int weight_range = 5;

  /// Uniform support of size 2..max_support, integer weights in [-range, range], then the
  /// mean is subtracted. Redraws until the molecule is nonzero.
  [[nodiscard]] Molecule draw(std::size_t point_count, std::mt19937_64& rng) const;
};

struct BasisConstantEstimate {
  double value = 0.0;
  std::size_t index = 0;
  Molecule witness;
  /// max ratio per index.
  std::vector<double> per_index;
  /// Largest duality gap over every solved instance.
  double max_gap = 0.0;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
};

/// max over seeded molecules mu and every index n of ||linearize(n, mu)|| / ||mu||.
BasisConstantEstimate basis_constant_estimate(const RetractionFamily& family, std::size_t samples,
                                              std::uint64_t seed, const MoleculeSampler& sampler = {});

}  // namespace lipnet
