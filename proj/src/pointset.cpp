// SPDX-License-Identifier: Apache-2.0
#include "lipnet/pointset.hpp"

#include <algorithm>
#include <string>

namespace lipnet {

namespace {

double norm_distance(const double* a, const double* b, std::size_t d, NormKind kind) {
  double acc = 0.0;
  switch (kind) {
    case NormKind::L1:
      for (std::size_t i = 0; i < d; ++i) acc += std::abs(a[i] - b[i]);
      return acc;
    case NormKind::L2:
      for (std::size_t i = 0; i < d; ++i) acc += (a[i] - b[i]) * (a[i] - b[i]);
      return std::sqrt(acc);
    case NormKind::LInf:
      for (std::size_t i = 0; i < d; ++i) acc = std::max(acc, std::abs(a[i] - b[i]));
      return acc;
  }
  return acc;
}

}  // namespace

Metric::Metric(std::size_t dim, NormKind kind, std::optional<BlockSpace> blocks)
    : dim_(dim), kind_(kind), blocks_(std::move(blocks)) {
  if (blocks_) {
    std::size_t off = 0;
    for (const auto& b : blocks_->blocks()) {
      block_offsets_.push_back(off);
      off += b.dim;
    }
    block_offsets_.push_back(off);
    dim_ = off;
  }
}

Metric Metric::normed(std::size_t dim, NormKind kind) {
  if (dim == 0) throw PreconditionError("metric dimension must be >= 1");
  return Metric(dim, kind, std::nullopt);
}

Metric Metric::block_sum(BlockSpace space) {
  return Metric(0, NormKind::LInf, std::move(space));
}

double Metric::distance(const double* a, const double* b) const {
  if (!blocks_) return norm_distance(a, b, dim_, kind_);
  double acc = 0.0;
  const bool sup = blocks_->ambient() == AmbientNorm::SupSum;
  for (std::size_t k = 0; k < blocks_->block_count(); ++k) {
    const auto off = block_offsets_[k];
    const double d = norm_distance(a + off, b + off, block_offsets_[k + 1] - off,
                                   blocks_->block(k).kind);
    acc = sup ? std::max(acc, d) : acc + d;
  }
  return acc;
}

double Metric::norm(const double* a) const {
  static thread_local std::vector<double> zeros;
  if (zeros.size() < dim_) zeros.assign(dim_, 0.0);
  return distance(a, zeros.data());
}

bool Metric::operator==(const Metric& other) const {
  if (dim_ != other.dim_ || blocks_.has_value() != other.blocks_.has_value()) return false;
  if (!blocks_) return kind_ == other.kind_;
  if (blocks_->ambient() != other.blocks_->ambient()) return false;
  if (blocks_->block_count() != other.blocks_->block_count()) return false;
  for (std::size_t k = 0; k < blocks_->block_count(); ++k) {
    if (blocks_->block(k).dim != other.blocks_->block(k).dim ||
        blocks_->block(k).kind != other.blocks_->block(k).kind) {
      return false;
    }
  }
  return true;
}

PointSet::PointSet(Metric metric, std::vector<double> flat)
    : metric_(std::move(metric)), flat_(std::move(flat)) {
  if (flat_.size() % metric_.dim() != 0) {
    throw DimensionMismatch("flat coordinate array is not a multiple of the dimension");
  }
  size_ = flat_.size() / metric_.dim();
}

PointSet PointSet::from_vectors(std::span<const Vector> points) {
  if (points.empty()) throw PreconditionError("point set needs at least one point");
  const auto d = points.front().dim();
  const auto kind = points.front().kind();
  std::vector<double> flat;
  flat.reserve(points.size() * d);
  for (const auto& p : points) {
    if (p.dim() != d || p.kind() != kind) throw DimensionMismatch("mixed point shapes");
    flat.insert(flat.end(), p.coords().begin(), p.coords().end());
  }
  return PointSet(Metric::normed(d, kind), std::move(flat));
}

Vector PointSet::vector(std::size_t i) const {
  if (metric_.is_block_sum()) throw PreconditionError("block-sum rows are not single vectors");
  return Vector(std::vector<double>(row(i), row(i) + dim()), metric_.kind());
}

PointSet PointSet::select(std::span<const std::size_t> indices) const {
  std::vector<double> flat;
  flat.reserve(indices.size() * dim());
  for (auto i : indices) flat.insert(flat.end(), row(i), row(i) + dim());
  return PointSet(metric_, std::move(flat));
}

GridIndex::GridIndex(std::size_t dim, double cell_size)
    : dim_(dim), indexed_(std::min(dim, kMaxIndexedDims)), cell_(cell_size) {
  if (!(cell_size > 0.0)) throw PreconditionError("grid cell size must be positive");
}

void GridIndex::insert(std::size_t id, const double* coords) {
  Key key{};
  for (std::size_t i = 0; i < indexed_; ++i) key[i] = cell_of(coords[i]);
  cells_[key].push_back(id);
  ++count_;
}

std::size_t nearest_index(std::span<const Vector> points, const Vector& u, double scale) {
  if (points.empty()) throw PreconditionError("nearest point in an empty set");
  std::vector<double> dist(points.size());
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < points.size(); ++j) {
    const auto p = points[j].coords();
    double acc = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      const double diff = std::abs(u[i] - scale * p[i]);
      switch (u.kind()) {
        case NormKind::L1:
          acc += diff;
          break;
        case NormKind::L2:
          acc += diff * diff;
          break;
        case NormKind::LInf:
          acc = std::max(acc, diff);
          break;
      }
    }
    dist[j] = u.kind() == NormKind::L2 ? std::sqrt(acc) : acc;
    best = std::min(best, dist[j]);
  }
  std::size_t pick = points.size();
  for (std::size_t j = 0; j < points.size(); ++j) {
    if (dist[j] > best + kTolerance) continue;
    if (pick == points.size() || lex_compare(points[j], points[pick]) < 0) pick = j;
  }
  return pick;
}

NearestSearch::NearestSearch(const PointSet& points, double cell_size)
    : points_(&points), index_(points.dim(), cell_size > 0.0 ? cell_size : 1.0) {
  if (points.size() == 0) throw PreconditionError("nearest search over an empty set");
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = 0; i < points.size(); ++i) {
    index_.insert(i, points.row(i));
    for (double c : points.coords(i)) {
      lo = std::min(lo, c);
      hi = std::max(hi, c);
    }
  }
  extent_ = hi - lo;
}

NearestSearch::Hit NearestSearch::nearest(const double* query, std::optional<std::size_t> skip) const {
  Hit best;
  if (points_->size() == 0 || (skip && points_->size() == 1)) return best;
  double radius = index_.cell_size();
  while (true) {
    index_.for_each_in_box(query, radius, [&](std::size_t id) {
      if (skip && id == *skip) return;
      const double d = points_->metric().distance(query, points_->row(id));
      if (d < best.distance || (d == best.distance && id < best.index)) best = {id, d};
    });
    // Any point within `radius` lies in the box, so a hit inside the radius is exact.
    if (best.distance <= radius) return best;
    if (radius > 4.0 * (extent_ + index_.cell_size()) + 1.0) {
      // Query far outside the data: the box now covers every cell.
      index_.for_each_in_box(query, std::numeric_limits<double>::max() / 4, [&](std::size_t id) {
        if (skip && id == *skip) return;
        const double d = points_->metric().distance(query, points_->row(id));
        if (d < best.distance || (d == best.distance && id < best.index)) best = {id, d};
      });
      return best;
    }
    radius *= 2.0;
  }
}

NearestSearch::Hit NearestSearch::nearest_lex(const double* query, double tol) const {
  const Hit first = nearest(query);
  Hit best = first;
  const std::size_t d = points_->dim();
  index_.for_each_in_box(query, first.distance + tol, [&](std::size_t id) {
    if (id == best.index) return;
    const double dist = points_->metric().distance(query, points_->row(id));
    if (dist > first.distance + tol) return;
    const double* a = points_->row(id);
    const double* b = points_->row(best.index);
    for (std::size_t i = 0; i < d; ++i) {
      if (a[i] < b[i] - kTolerance) {
        best = {id, dist};
        return;
      }
      if (a[i] > b[i] + kTolerance) return;
    }
  });
  return best;
}

}  // namespace lipnet
