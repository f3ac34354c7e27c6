// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <compare>
#include <cstddef>
#include <map>
#include <string>
#include <memory>
#include <utility>
#include <vector>

#include "lipnet/family.hpp"
#include "lipnet/lipcheck.hpp"
#include "lipnet/nets.hpp"

namespace lipnet {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// q_0 = 0, q_1 = 1, q_{k+1} = q_k * k * 2^{k+2}. The diamond radii are r^s_k = s / q_k.
class QSeq {
 public:
  explicit QSeq(int k_max);

  [[nodiscard]] int size() const { return static_cast<int>(q_.size()) - 1; }
  /// q_k for 0 <= k <= size().
  [[nodiscard]] const Integer& operator[](int k) const { return q_.at(static_cast<std::size_t>(k)); }
  /// r^s_k = s / q_k for k >= 1.
  [[nodiscard]] Rational r(int k, const Integer& s) const;

 private:
  std::vector<Integer> q_;
};

/// One base point per block; radius 0 marks a zero block.
struct GridPoint {
  std::vector<BasePoint> blocks;

  /// n(x): 1-based index of the last nonzero block, 0 for the origin.
  [[nodiscard]] int n() const;
  [[nodiscard]] int norm(std::size_t block) const { return blocks.at(block).radius; }
  [[nodiscard]] int total_norm() const;

  auto operator<=>(const GridPoint&) const = default;
};

/// A block-decomposed vector with exact (rational) block norms alongside float coordinates.
struct BlockVector {
  std::vector<Vector> blocks;
  std::vector<Rational> norms;
};

/// Spiderweb bases for each block, the ambient sum norm and a per-block norm cap.
class GridSpace {
 public:
  GridSpace(std::vector<std::shared_ptr<const SpiderwebBase>> bases, AmbientNorm ambient, int norm_cap);

  [[nodiscard]] std::size_t block_count() const { return bases_.size(); }
  [[nodiscard]] const SpiderwebBase& base(std::size_t block) const { return *bases_.at(block); }
  [[nodiscard]] const std::vector<std::shared_ptr<const SpiderwebBase>>& bases() const { return bases_; }
  [[nodiscard]] const BlockSpace& space() const { return space_; }
  [[nodiscard]] AmbientNorm ambient() const { return space_.ambient(); }
  [[nodiscard]] int norm_cap() const { return cap_; }
  [[nodiscard]] const QSeq& q() const { return q_; }
  /// Smallest block a and largest block b.
  [[nodiscard]] NetParams params() const;

  /// Throws PreconditionError unless x has one valid base point per block within the cap.
  void validate(const GridPoint& x) const;
  [[nodiscard]] BlockVector vector(const GridPoint& x) const;
  [[nodiscard]] std::vector<double> flat(const GridPoint& x) const;
  [[nodiscard]] std::vector<double> flat(const BlockVector& x) const;
  [[nodiscard]] double distance(const BlockVector& x, const BlockVector& y) const;
  [[nodiscard]] Metric metric() const { return Metric::block_sum(space_); }

  /// Every grid point with all block norms <= norm_cap, in no particular order.
  [[nodiscard]] std::vector<GridPoint> enumerate() const;

 private:
  std::vector<std::shared_ptr<const SpiderwebBase>> bases_;
  BlockSpace space_;
  int cap_;
  QSeq q_;
};

/// Builds one spiderweb base per block with separation a, materialized up to the cap.
GridSpace build_grid_space(const std::vector<BlockSpec>& blocks, AmbientNorm ambient, double a,
                           int norm_cap, double mesh, const BaseBuildOptions& options = {});

/// s(x) = sum ||x_i|| q_i.
Integer s_of(const GridSpace& space, const GridPoint& x);
/// sum ||x_i|| q_i <= s.
bool in_diamond(const GridSpace& space, const GridPoint& x, const Integer& s);
/// Weighted-sum membership for block vectors with exact norms.
bool in_diamond(const GridSpace& space, const BlockVector& x, const Rational& s);

/// varphi_{s(x)}: replaces the last nonzero block x_n by Psi_{||x_n|| - 1}(x_n). Requires x != 0.
GridPoint local_phi(const GridSpace& space, const GridPoint& x);

/// s_0 = s(x), s_{k+1} = s_k - q_{n(phi_{s_k}(x))}, until the value is <= s_stop (or 0).
std::vector<Integer> sk_sequence(const GridSpace& space, const GridPoint& x, const Integer& s_stop = 0);

/// phi_s by local steps along the s_k sequence.
GridPoint phi_grid(const GridSpace& space, const Integer& s, const GridPoint& x);
/// phi_s as the literal composition varphi_{s+1} o ... o varphi_{s(x)}. Test oracle.
GridPoint phi_grid_naive(const GridSpace& space, const Integer& s, const GridPoint& x);

/// The unique (i, j) with 1 <= j <= ||x_{n-i}|| and k = j + sum_{i'=1}^{i} ||x_{n-i'+1}||.
std::pair<int, int> ij_of(int k, const GridPoint& x);
/// P_{n-i-1}(x) + Psi_{||x_{n-i}|| - j}(x_{n-i}) with (i, j) = ij_of(k, x).
GridPoint phi_closed_form(const GridSpace& space, int k, const GridPoint& x);

/// m(x, s) = max{k <= n(x)+1 : sum_{i<k} ||x_i|| q_i <= s} (1-based); requires s >= 1.
int m_of(const GridSpace& space, const BlockVector& x, const Integer& s);
/// F^s; F^0 is the constant 0.
BlockVector F_s(const GridSpace& space, const Integer& s, const BlockVector& x);
BlockVector F_s(const GridSpace& space, const Integer& s, const GridPoint& x);

/// (12b + 4) / a + f_lipschitz.
double grid_family_bound(const NetParams& params, double f_lipschitz);

/// The truncated grid ordered by s(x) and lexicographically inside each N_s minus N_{s-1},
/// with the tables of every phi_s.
class GridNet {
 public:
  explicit GridNet(std::shared_ptr<const GridSpace> space);

  [[nodiscard]] const GridSpace& space() const { return *space_; }
  [[nodiscard]] std::size_t size() const { return grid_.size(); }
  [[nodiscard]] const GridPoint& point(std::size_t pos) const { return grid_.at(pos); }
  [[nodiscard]] const std::vector<GridPoint>& grid_points() const { return grid_; }
  [[nodiscard]] const PointSet& points() const { return *points_; }
  [[nodiscard]] std::shared_ptr<const PointSet> points_ptr() const { return points_; }
  [[nodiscard]] std::size_t s_max() const { return tables_.size() - 1; }
  [[nodiscard]] std::size_t s_of(std::size_t pos) const { return s_.at(pos); }
  [[nodiscard]] std::size_t position_of(const GridPoint& x) const;
  /// Position of phi_s(point pos).
  [[nodiscard]] std::size_t phi(std::size_t s, std::size_t pos) const { return tables_.at(s).at(pos); }
  [[nodiscard]] const std::vector<std::size_t>& level_offsets() const { return offsets_; }

  [[nodiscard]] RetractionFamily family(double f_lipschitz, BranchRule rule = BranchRule::Standard) const;

 private:
  std::shared_ptr<const GridSpace> space_;
  std::vector<GridPoint> grid_;
  std::shared_ptr<const PointSet> points_;
  std::vector<std::size_t> s_;
  std::vector<std::size_t> offsets_;
  std::map<GridPoint, std::size_t> index_;
  std::vector<RetractionFamily::Table> tables_;
};

struct FLipschitz {
  /// per_s[s] = ||F^s||_Lip over the grid points, s = 0..s_max (per_s[0] = 0).
  std::vector<double> per_s;
  double sup = 0.0;
  double min_positive = 0.0;
  /// sup / min over s >= 1.
  double spread = 0.0;
};

/// Exact pairwise Lipschitz constants of F^s on the grid points for every s in [1, s_max].
FLipschitz measure_F_lipschitz(const GridNet& net);

struct IdentityCheck {
  std::string name;
  bool pass = true;
  /// Number of individual equalities evaluated.
  std::size_t checked = 0;
  /// First failing point position and parameter (s or k).
  std::size_t point = 0;
  long long parameter = 0;
};

/// Exact identities on every grid point: the boundary property of s(x), the weighted-sum
/// form, the local step, the s_k recurrence against the definition through phi_s, the
/// collapse phi_{s_k - 1} = phi_{s_{k+1}}, the shift s_j(phi_{s_{k-j}}(x)) = s_k(x), the closed
/// form, the literal composition and the stored tables.
std::vector<IdentityCheck> check_grid_identities(const GridNet& net);

struct RadialStep {
  /// (F^s - F^t)(y) = lambda * y_n / ||y_n||.
  double lambda = 0.0;
  /// ||(F^s - F^t)(y) - lambda u||.
  double residual = 0.0;
  /// ||(y - F^t(y)) - u||, zero when y satisfies the unit-step hypothesis.
  double hypothesis = 0.0;
};

/// For t <= s and y whose last nonzero block is y_n, with u = y_n / ||y_n||.
RadialStep radial_step_lambda(const GridSpace& space, const Integer& s, const Integer& t, const BlockVector& y);

struct GridProximity {
  /// ||phi_{s_k(x)}(x) - F^{s_k(x)}(x)|| against 6b.
  BoundEntry sk_gap;
  /// ||phi_s(x) - F^s(x)|| for s <= s(x) against 1 + 6b.
  BoundEntry s_gap;
  /// ||F^{s+1}(x) - F^s(x)|| against 1.
  BoundEntry unit_step;
  /// max ||F^s(F^t(x)) - F^min(s,t)(x)|| over all s, t <= s_max and all grid points.
  double semigroup_deviation = 0.0;
  /// lambda over y = F^{s_k(x)}(x), t = s_{k+1}(x), s in [t, s_k(x)].
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  double lambda_residual = 0.0;
  std::size_t lambda_instances = 0;
};

/// Proximity, semigroup and radial-step checks on every point of the grid, with b the
/// largest block b.
GridProximity grid_proximity(const GridNet& net);

}  // namespace lipnet
