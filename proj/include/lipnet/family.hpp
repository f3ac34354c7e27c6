// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <vector>

#include "lipnet/pointset.hpp"

namespace lipnet {

/// How an index (level L, i-th point of level L) picks between the level maps.
/// Standard is the two-branch rule: use G_L(x) when it is among the first points
/// up to the index, otherwise G_{L-1}(x). Flipped swaps the branches and exists
/// to build deliberately broken families for the checkers.
enum class BranchRule { Standard, Flipped };

/// Retractions onto the prefixes of an ordered finite point list.
///
/// Points are grouped into consecutive levels. Each level L carries a map G_L
/// (stored as positions into the ordered list) with image inside levels <= L.
/// The retraction for a global index idx in level L is
///   phi_idx(x) = G_L(x)       if pos(G_L(x)) <= idx
///              = G_{L-1}(x)   otherwise.
/// Both the spiderweb family (G_n = Psi_n) and the grid family (G_s = phi_s) have
/// this shape.
class RetractionFamily {
 public:
  using Table = std::vector<std::uint32_t>;

  RetractionFamily(std::shared_ptr<const PointSet> points, std::vector<std::size_t> level_offsets,
                   std::vector<Table> level_maps, double theoretical_bound,
                   BranchRule rule = BranchRule::Standard);

  [[nodiscard]] std::size_t size() const { return points_->size(); }
  [[nodiscard]] const PointSet& points() const { return *points_; }
  [[nodiscard]] std::shared_ptr<const PointSet> points_ptr() const { return points_; }
  [[nodiscard]] double theoretical_bound() const { return bound_; }
  [[nodiscard]] BranchRule rule() const { return rule_; }

  [[nodiscard]] std::size_t level_count() const { return level_maps_.size(); }
  [[nodiscard]] std::size_t level_begin(std::size_t level) const { return offsets_[level]; }
  [[nodiscard]] std::size_t level_end(std::size_t level) const { return offsets_[level + 1]; }
  [[nodiscard]] std::size_t level_of(std::size_t index) const;
  [[nodiscard]] const Table& level_map(std::size_t level) const { return level_maps_[level]; }
  [[nodiscard]] const std::vector<std::size_t>& level_offsets() const { return offsets_; }

  /// Position of phi_index(point j).
  [[nodiscard]] std::size_t eval(std::size_t index, std::size_t j) const;
  /// Same, with the level of `index` already known.
  [[nodiscard]] std::size_t eval_in_level(std::size_t level, std::size_t index, std::size_t j) const {
    const std::size_t g = level_maps_[level][j];
    const bool take_upper = g <= index;
    const bool upper = rule_ == BranchRule::Standard ? take_upper : !take_upper;
    if (upper || level == 0) return g;
    return level_maps_[level - 1][j];
  }

  /// Same tables over new coordinates (conjugation by a bijection keeps positions).
  [[nodiscard]] RetractionFamily with_points(std::shared_ptr<const PointSet> points,
                                             double theoretical_bound) const;
  [[nodiscard]] RetractionFamily with_rule(BranchRule rule) const;
  /// Restriction to the first n points. Requires n to keep every level map inside the prefix,
  /// which holds for any prefix because images never move to later positions.
  [[nodiscard]] RetractionFamily truncated(std::size_t n) const;

 private:
  std::shared_ptr<const PointSet> points_;
  std::vector<std::size_t> offsets_;
  std::vector<Table> level_maps_;
  double bound_;
  BranchRule rule_;
};

}  // namespace lipnet
