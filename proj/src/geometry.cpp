// SPDX-License-Identifier: Apache-2.0
#include "lipnet/geometry.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

namespace lipnet {

namespace {

std::string upper(std::string_view text) {
  std::string out(text);
  for (auto& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

void require_same_shape(const Vector& x, const Vector& y) {
  if (x.dim() != y.dim() || x.kind() != y.kind()) {
    throw DimensionMismatch("vectors of different dimension or norm: " +
                            std::to_string(x.dim()) + " vs " + std::to_string(y.dim()));
  }
}

}  // namespace

std::string_view to_string(NormKind kind) {
  switch (kind) {
    case NormKind::L1:
      return "L1";
    case NormKind::L2:
      return "L2";
    case NormKind::LInf:
      return "LINF";
  }
  return "?";
}

NormKind parse_norm_kind(std::string_view text) {
  const auto t = upper(text);
  if (t == "L1") return NormKind::L1;
  if (t == "L2") return NormKind::L2;
  if (t == "LINF") return NormKind::LInf;
  throw PreconditionError("unknown norm kind '" + std::string(text) + "'");
}

double norm_of(std::span<const double> coords, NormKind kind) {
  double acc = 0.0;
  switch (kind) {
    case NormKind::L1:
      for (double c : coords) acc += std::abs(c);
      return acc;
    case NormKind::L2:
      for (double c : coords) acc += c * c;
      return std::sqrt(acc);
    case NormKind::LInf:
      for (double c : coords) acc = std::max(acc, std::abs(c));
      return acc;
  }
  return acc;
}

Vector::Vector(std::vector<double> coords, NormKind kind) : coords_(std::move(coords)), kind_(kind) {
  if (coords_.empty()) throw PreconditionError("vector dimension must be >= 1");
  for (double c : coords_) {
    if (!std::isfinite(c)) throw PreconditionError("vector coordinates must be finite");
  }
}

Vector::Vector(std::initializer_list<double> coords, NormKind kind)
    : Vector(std::vector<double>(coords), kind) {}

Vector Vector::zero(std::size_t dim, NormKind kind) {
  return Vector(std::vector<double>(dim, 0.0), kind);
}

bool Vector::is_zero() const {
  return std::all_of(coords_.begin(), coords_.end(), [](double c) { return c == 0.0; });
}

Vector Vector::operator+(const Vector& other) const {
  require_same_shape(*this, other);
  std::vector<double> out(coords_);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += other.coords_[i];
  return Vector(std::move(out), kind_);
}

Vector Vector::operator-(const Vector& other) const {
  require_same_shape(*this, other);
  std::vector<double> out(coords_);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] -= other.coords_[i];
  return Vector(std::move(out), kind_);
}

Vector Vector::operator*(double scale) const {
  std::vector<double> out(coords_);
  for (auto& c : out) c *= scale;
  return Vector(std::move(out), kind_);
}

double distance(const Vector& x, const Vector& y) {
  require_same_shape(x, y);
  const auto a = x.coords();
  const auto b = y.coords();
  double acc = 0.0;
  switch (x.kind()) {
    case NormKind::L1:
      for (std::size_t i = 0; i < a.size(); ++i) acc += std::abs(a[i] - b[i]);
      return acc;
    case NormKind::L2:
      for (std::size_t i = 0; i < a.size(); ++i) acc += (a[i] - b[i]) * (a[i] - b[i]);
      return std::sqrt(acc);
    case NormKind::LInf:
      for (std::size_t i = 0; i < a.size(); ++i) acc = std::max(acc, std::abs(a[i] - b[i]));
      return acc;
  }
  return acc;
}

bool approx_equal(const Vector& x, const Vector& y, double tol) {
  if (x.dim() != y.dim()) return false;
  for (std::size_t i = 0; i < x.dim(); ++i) {
    if (std::abs(x[i] - y[i]) > tol) return false;
  }
  return true;
}

int lex_compare(const Vector& x, const Vector& y, double tol) {
  const std::size_t d = std::min(x.dim(), y.dim());
  for (std::size_t i = 0; i < d; ++i) {
    const double diff = x[i] - y[i];
    if (diff < -tol) return -1;
    if (diff > tol) return 1;
  }
  if (x.dim() != y.dim()) return x.dim() < y.dim() ? -1 : 1;
  return 0;
}

Vector radial_project(const Vector& x, double s) {
  if (!(s >= 0.0)) throw PreconditionError("radial_project: radius must be >= 0");
  const double r = x.norm();
  if (r <= s) return x;
  return x * (s / r);
}

int n_of(const Vector& x) {
  const double r = x.norm();
  const int n = static_cast<int>(std::ceil(r - kTolerance));
  return std::max(n, 1);
}

std::string_view to_string(AmbientNorm ambient) {
  return ambient == AmbientNorm::SupSum ? "SUP" : "L1";
}

AmbientNorm parse_ambient(std::string_view text) {
  const auto t = upper(text);
  if (t == "SUP" || t == "SUP_SUM") return AmbientNorm::SupSum;
  if (t == "L1" || t == "L1_SUM") return AmbientNorm::L1Sum;
  throw PreconditionError("unknown ambient norm '" + std::string(text) + "'");
}

BlockSpace::BlockSpace(std::vector<BlockSpec> blocks, AmbientNorm ambient)
    : blocks_(std::move(blocks)), ambient_(ambient) {
  if (blocks_.empty()) throw PreconditionError("block space needs at least one block");
  for (const auto& b : blocks_) {
    if (b.dim == 0) throw PreconditionError("block dimension must be >= 1");
  }
}

double BlockSpace::combine(std::span<const double> block_norms) const {
  double acc = 0.0;
  for (double v : block_norms) acc = ambient_ == AmbientNorm::SupSum ? std::max(acc, v) : acc + v;
  return acc;
}

BlockNorms block_norms(std::span<const Vector> blocks, const BlockSpace& space) {
  if (blocks.size() != space.block_count()) {
    throw DimensionMismatch("expected " + std::to_string(space.block_count()) + " blocks, got " +
                            std::to_string(blocks.size()));
  }
  BlockNorms out;
  out.per_block.reserve(blocks.size());
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const auto& spec = space.block(i);
    if (blocks[i].dim() != spec.dim || blocks[i].kind() != spec.kind) {
      throw DimensionMismatch("block " + std::to_string(i) + " does not conform to the space");
    }
    out.per_block.push_back(blocks[i].norm());
  }
  out.ambient = space.combine(out.per_block);
  return out;
}

double block_distance(std::span<const Vector> x, std::span<const Vector> y,
                      const BlockSpace& space) {
  if (x.size() != space.block_count() || y.size() != space.block_count()) {
    throw DimensionMismatch("block count does not match the space");
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = distance(x[i], y[i]);
    acc = space.ambient() == AmbientNorm::SupSum ? std::max(acc, d) : acc + d;
  }
  return acc;
}

}  // namespace lipnet
