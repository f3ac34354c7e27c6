// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace lipnet {

/// Absolute tolerance for floating point comparisons of lengths and coordinates.
inline constexpr double kTolerance = 1e-9;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A documented precondition of an operation does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Operands live in spaces of different shape.
class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// A construction would exceed its configured size budget.
class ResourceError : public Error {
 public:
  using Error::Error;
};

enum class NormKind { L1, L2, LInf };

std::string_view to_string(NormKind kind);
/// Accepts "L1", "L2", "LINF" (case-insensitive). Throws PreconditionError otherwise.
NormKind parse_norm_kind(std::string_view text);

/// Norm of a raw coordinate span.
double norm_of(std::span<const double> coords, NormKind kind);

/// A point of (R^d, ||.||_kind). Immutable value type.
class Vector {
 public:
  Vector() = default;
  Vector(std::vector<double> coords, NormKind kind);
  Vector(std::initializer_list<double> coords, NormKind kind);

  static Vector zero(std::size_t dim, NormKind kind);

  [[nodiscard]] std::size_t dim() const { return coords_.size(); }
  [[nodiscard]] NormKind kind() const { return kind_; }
  [[nodiscard]] std::span<const double> coords() const { return coords_; }
  [[nodiscard]] double operator[](std::size_t i) const { return coords_[i]; }

  [[nodiscard]] double norm() const { return norm_of(coords_, kind_); }
  [[nodiscard]] bool is_zero() const;

  Vector operator+(const Vector& other) const;
  Vector operator-(const Vector& other) const;
  Vector operator*(double scale) const;
  friend Vector operator*(double scale, const Vector& v) { return v * scale; }

  /// Bitwise coordinate equality.
  bool operator==(const Vector& other) const = default;

 private:
  std::vector<double> coords_;
  NormKind kind_ = NormKind::L2;
};

[[nodiscard]] inline double norm(const Vector& x) { return x.norm(); }
double distance(const Vector& x, const Vector& y);

/// Coordinatewise equality up to `tol`.
bool approx_equal(const Vector& x, const Vector& y, double tol = kTolerance);

/// Lexicographic order on coordinates where coordinates closer than `tol` count as equal.
/// Returns <0, 0, >0.
int lex_compare(const Vector& x, const Vector& y, double tol = kTolerance);

/// R_s: identity on the closed s-ball, radial rescaling to norm s outside it.
Vector radial_project(const Vector& x, double s);

/// Smallest positive integer n with ||x|| <= n (n_of(0) == 1). Norms within
/// kTolerance above an integer are rounded down onto it.
int n_of(const Vector& x);

enum class AmbientNorm { SupSum, L1Sum };

std::string_view to_string(AmbientNorm ambient);
AmbientNorm parse_ambient(std::string_view text);

struct BlockSpec {
  std::size_t dim = 1;
  NormKind kind = NormKind::LInf;
};

/// Finite direct sum of normed blocks X_1 + ... + X_k under a sup or l1 sum norm.
class BlockSpace {
 public:
  BlockSpace(std::vector<BlockSpec> blocks, AmbientNorm ambient);

  [[nodiscard]] std::size_t block_count() const { return blocks_.size(); }
  [[nodiscard]] const BlockSpec& block(std::size_t i) const { return blocks_.at(i); }
  [[nodiscard]] const std::vector<BlockSpec>& blocks() const { return blocks_; }
  [[nodiscard]] AmbientNorm ambient() const { return ambient_; }

  /// Combine block norms into the ambient norm.
  [[nodiscard]] double combine(std::span<const double> block_norms) const;

 private:
  std::vector<BlockSpec> blocks_;
  AmbientNorm ambient_;
};

struct BlockNorms {
  std::vector<double> per_block;
  double ambient = 0.0;
};

/// Per-block norms and the ambient norm of a block-decomposed vector.
BlockNorms block_norms(std::span<const Vector> blocks, const BlockSpace& space);

/// Ambient distance between two block-decomposed vectors.
double block_distance(std::span<const Vector> x, std::span<const Vector> y,
                      const BlockSpace& space);

}  // namespace lipnet
