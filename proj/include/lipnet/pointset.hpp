// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "lipnet/geometry.hpp"

namespace lipnet {

/// Distance on flat coordinate rows: a single normed space or a block sum.
/// Every metric here dominates the l-infinity distance of the raw coordinates,
/// which is what the grid index relies on.
class Metric {
 public:
  static Metric normed(std::size_t dim, NormKind kind);
  static Metric block_sum(BlockSpace space);

  [[nodiscard]] std::size_t dim() const { return dim_; }
  [[nodiscard]] bool is_block_sum() const { return blocks_.has_value(); }
  [[nodiscard]] NormKind kind() const { return kind_; }
  [[nodiscard]] const BlockSpace& space() const { return *blocks_; }

  [[nodiscard]] double distance(const double* a, const double* b) const;
  [[nodiscard]] double norm(const double* a) const;

  bool operator==(const Metric& other) const;

 private:
  Metric(std::size_t dim, NormKind kind, std::optional<BlockSpace> blocks);

  std::size_t dim_;
  NormKind kind_;
  std::optional<BlockSpace> blocks_;
  std::vector<std::size_t> block_offsets_;
};

/// Finite point list with row-major coordinates under a Metric.
class PointSet {
 public:
  PointSet(Metric metric, std::vector<double> flat);
  /// All vectors must share dimension and norm kind. Requires at least one vector.
  static PointSet from_vectors(std::span<const Vector> points);

  [[nodiscard]] const Metric& metric() const { return metric_; }
  [[nodiscard]] std::size_t size() const { return size_; }
  [[nodiscard]] std::size_t dim() const { return metric_.dim(); }
  [[nodiscard]] const double* row(std::size_t i) const { return flat_.data() + i * metric_.dim(); }
  [[nodiscard]] std::span<const double> coords(std::size_t i) const {
    return {row(i), metric_.dim()};
  }
  [[nodiscard]] const std::vector<double>& flat() const { return flat_; }

  [[nodiscard]] double distance(std::size_t i, std::size_t j) const {
    return metric_.distance(row(i), row(j));
  }
  [[nodiscard]] double norm(std::size_t i) const { return metric_.norm(row(i)); }
  /// Only for single-normed sets.
  [[nodiscard]] Vector vector(std::size_t i) const;

  /// Rows taken by index, in the given order.
  [[nodiscard]] PointSet select(std::span<const std::size_t> indices) const;

 private:
  Metric metric_;
  std::vector<double> flat_;
  std::size_t size_ = 0;
};

/// Uniform bucket grid over the first (up to kMaxIndexedDims) coordinates.
/// Box queries are exact filters for any Metric because metrics dominate l-infinity.
class GridIndex {
 public:
  static constexpr std::size_t kMaxIndexedDims = 6;

  GridIndex(std::size_t dim, double cell_size);

  void insert(std::size_t id, const double* coords);

  /// Calls fn(id) for every stored id whose cell intersects the l-infinity box
  /// of half-width `radius` around `center`.
  template <typename Fn>
  void for_each_in_box(const double* center, double radius, Fn&& fn) const;

  [[nodiscard]] std::size_t size() const { return count_; }
  [[nodiscard]] double cell_size() const { return cell_; }

 private:
  using Key = std::array<std::int32_t, kMaxIndexedDims>;
  struct KeyHash {
    std::size_t operator()(const Key& k) const noexcept {
      std::uint64_t h = 1469598103934665603ULL;
      for (auto v : k) {
        h ^= static_cast<std::uint32_t>(v);
        h *= 1099511628211ULL;
      }
      return static_cast<std::size_t>(h);
    }
  };

  [[nodiscard]] std::int32_t cell_of(double c) const {
    constexpr double kLimit = 1 << 30;
    return static_cast<std::int32_t>(std::clamp(std::floor(c / cell_), -kLimit, kLimit));
  }

  std::size_t dim_;
  std::size_t indexed_;
  double cell_;
  std::size_t count_ = 0;
  std::unordered_map<Key, std::vector<std::size_t>, KeyHash> cells_;
};

template <typename Fn>
void GridIndex::for_each_in_box(const double* center, double radius, Fn&& fn) const {
  if (cells_.empty()) return;
  Key lo{};
  Key hi{};
  for (std::size_t i = 0; i < indexed_; ++i) {
    lo[i] = cell_of(center[i] - radius);
    hi[i] = cell_of(center[i] + radius);
  }
  // When the box covers more cells than are occupied, walk the occupied ones.
  double box_cells = 1.0;
  for (std::size_t i = 0; i < indexed_; ++i) box_cells *= static_cast<double>(hi[i] - lo[i] + 1);
  if (box_cells > static_cast<double>(cells_.size())) {
    for (const auto& [key, ids] : cells_) {
      bool inside = true;
      for (std::size_t i = 0; i < indexed_ && inside; ++i) inside = key[i] >= lo[i] && key[i] <= hi[i];
      if (inside) {
        for (auto id : ids) fn(id);
      }
    }
    return;
  }
  Key cur = lo;
  while (true) {
    if (auto it = cells_.find(cur); it != cells_.end()) {
      for (auto id : it->second) fn(id);
    }
    std::size_t axis = 0;
    while (axis < indexed_) {
      if (cur[axis] < hi[axis]) {
        ++cur[axis];
        break;
      }
      cur[axis] = lo[axis];
      ++axis;
    }
    if (axis == indexed_) break;
  }
}

/// Index of the point of `points` nearest to `u`. Distances within kTolerance of
/// the minimum are ties, resolved towards the lexicographically smallest point.
/// `scale` multiplies every candidate point before measuring.
std::size_t nearest_index(std::span<const Vector> points, const Vector& u, double scale = 1.0);

/// Exact nearest neighbour search over a PointSet through a GridIndex.
class NearestSearch {
 public:
  explicit NearestSearch(const PointSet& points, double cell_size = 0.0);

  struct Hit {
    std::size_t index = 0;
    double distance = std::numeric_limits<double>::infinity();
  };

  /// Nearest stored point to `query`, optionally skipping one id.
  [[nodiscard]] Hit nearest(const double* query,
                            std::optional<std::size_t> skip = std::nullopt) const;

  /// Nearest point where distances within `tol` of the minimum tie and the
  /// lexicographically smallest tied point wins.
  [[nodiscard]] Hit nearest_lex(const double* query, double tol = kTolerance) const;

 private:
  const PointSet* points_;
  GridIndex index_;
  double extent_ = 0.0;
};

}  // namespace lipnet
