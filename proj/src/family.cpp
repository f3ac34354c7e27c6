// SPDX-License-Identifier: Apache-2.0
#include "lipnet/family.hpp"

#include <algorithm>
#include <string>

namespace lipnet {

RetractionFamily::RetractionFamily(std::shared_ptr<const PointSet> points,
                                   std::vector<std::size_t> level_offsets,
                                   std::vector<Table> level_maps, double theoretical_bound,
                                   BranchRule rule)
    : points_(std::move(points)),
      offsets_(std::move(level_offsets)),
      level_maps_(std::move(level_maps)),
      bound_(theoretical_bound),
      rule_(rule) {
  if (!points_) throw PreconditionError("family needs a point set");
  const auto n = points_->size();
  if (offsets_.size() != level_maps_.size() + 1 || offsets_.front() != 0 || offsets_.back() != n) {
    throw PreconditionError("level offsets must start at 0, end at the point count, and match the maps");
  }
  if (!std::is_sorted(offsets_.begin(), offsets_.end())) {
    throw PreconditionError("level offsets must be nondecreasing");
  }
  for (std::size_t level = 0; level < level_maps_.size(); ++level) {
    const auto& map = level_maps_[level];
    if (map.size() != n) throw PreconditionError("level map size differs from the point count");
    for (auto g : map) {
      if (g >= offsets_[level + 1]) {
        throw PreconditionError("level map " + std::to_string(level) + " leaves its levels");
      }
    }
  }
}

std::size_t RetractionFamily::level_of(std::size_t index) const {
  if (index >= size()) throw PreconditionError("retraction index out of range");
  const auto it = std::upper_bound(offsets_.begin(), offsets_.end(), index);
  return static_cast<std::size_t>(it - offsets_.begin()) - 1;
}

std::size_t RetractionFamily::eval(std::size_t index, std::size_t j) const {
  return eval_in_level(level_of(index), index, j);
}

RetractionFamily RetractionFamily::with_points(std::shared_ptr<const PointSet> points,
                                               double theoretical_bound) const {
  if (!points || points->size() != size()) {
    throw DimensionMismatch("replacement point set has a different size");
  }
  return RetractionFamily(std::move(points), offsets_, level_maps_, theoretical_bound, rule_);
}

RetractionFamily RetractionFamily::with_rule(BranchRule rule) const {
  return RetractionFamily(points_, offsets_, level_maps_, bound_, rule);
}

RetractionFamily RetractionFamily::truncated(std::size_t n) const {
  if (n == 0 || n > size()) throw PreconditionError("truncation size out of range");
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  auto pts = std::make_shared<const PointSet>(points_->select(idx));
  std::vector<std::size_t> offsets{0};
  std::vector<Table> maps;
  for (std::size_t level = 0; level < level_maps_.size() && offsets_[level] < n; ++level) {
    offsets.push_back(std::min(offsets_[level + 1], n));
    maps.emplace_back(level_maps_[level].begin(), level_maps_[level].begin() + static_cast<std::ptrdiff_t>(n));
  }
  return RetractionFamily(std::move(pts), std::move(offsets), std::move(maps), bound_, rule_);
}

}  // namespace lipnet
