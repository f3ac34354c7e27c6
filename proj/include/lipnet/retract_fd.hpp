// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "lipnet/family.hpp"
#include "lipnet/nets.hpp"

namespace lipnet {

/// rho_n: nearest point of (n/(n-1)) S_{n-1} to u, lexicographic ties. rho_1 == 0.
/// Requires ||u|| = n within kTolerance and n - 1 <= base.max_layer().
Vector rho(const SpiderwebBase& base, int n, const Vector& u);

/// psi_n on a vector of norm <= n, evaluated literally from rho_n.
Vector psi(const SpiderwebBase& base, int n, const Vector& x);

/// Psi_n as the literal composition psi_{n+1} o ... o psi_{n(x)}. Test oracle.
Vector Psi_naive(const SpiderwebBase& base, int n, const Vector& x);

/// psi_n on a base point of radius <= n.
BasePoint psi(const SpiderwebBase& base, int n, BasePoint p);

/// Psi_n on a base point by telescoping: one parent lookup per dyadic radius in (n, radius].
BasePoint Psi(const SpiderwebBase& base, int n, BasePoint p);

/// K = (12b + 2) / a + 2.
double spiderweb_family_bound(const NetParams& params);

/// A spiderweb ordered by shell (shell n holds B_n minus B_{n-1}, shell 0 the origin) and
/// lexicographically inside each shell, with the tables of every Psi_n.
class OrderedNet {
 public:
  explicit OrderedNet(Spiderweb web);

  [[nodiscard]] const Spiderweb& spiderweb() const { return web_; }
  [[nodiscard]] const SpiderwebBase& base() const { return *web_.base; }
  [[nodiscard]] int radius() const { return web_.radius; }
  [[nodiscard]] std::size_t size() const { return points_->size(); }
  [[nodiscard]] const PointSet& points() const { return *points_; }
  [[nodiscard]] std::shared_ptr<const PointSet> points_ptr() const { return points_; }
  [[nodiscard]] Vector point(std::size_t pos) const { return points_->vector(pos); }

  /// First position of shell n, for 0 <= n <= radius() + 1.
  [[nodiscard]] std::size_t shell_offset(int n) const { return offsets_.at(static_cast<std::size_t>(n)); }
  [[nodiscard]] std::size_t shell_size(int n) const { return shell_offset(n + 1) - shell_offset(n); }
  [[nodiscard]] int shell_of(std::size_t pos) const { return shells_.at(pos); }
  /// Global position of the within-shell index i (1-based) of shell n.
  [[nodiscard]] std::size_t position(int n, std::size_t i) const;
  /// Base point behind a position, if it is one.
  [[nodiscard]] std::optional<BasePoint> base_point(std::size_t pos) const { return base_ids_.at(pos); }
  [[nodiscard]] std::size_t position_of(BasePoint p) const;

  /// Position of Psi_n(point pos), 0 <= n <= radius().
  [[nodiscard]] std::size_t Psi(int n, std::size_t pos) const {
    return tables_.at(static_cast<std::size_t>(n)).at(pos);
  }
  [[nodiscard]] const RetractionFamily::Table& Psi_table(int n) const {
    return tables_.at(static_cast<std::size_t>(n));
  }

  /// The retractional basis phi_(n,i) with K = (12b+2)/a + 2 from the spiderweb parameters.
  [[nodiscard]] RetractionFamily family(BranchRule rule = BranchRule::Standard) const;

 private:
  Spiderweb web_;
  std::shared_ptr<const PointSet> points_;
  std::vector<std::size_t> offsets_;
  std::vector<int> shells_;
  std::vector<std::optional<BasePoint>> base_ids_;
  std::vector<std::vector<std::size_t>> base_pos_;
  std::vector<RetractionFamily::Table> tables_;
};

/// phi_(n,i)(x) for the i-th point (1-based) of shell n; returns a position.
std::size_t phi_fd(const OrderedNet& net, const RetractionFamily& family, int n, std::size_t i,
                   std::size_t x);

struct RadialGap {
  double value = 0.0;
  std::size_t point = 0;
  int n = 0;
};

/// max over points x and n < shell(x) of ||Psi_n(x) - R_n(x)||.
RadialGap radial_gap(const OrderedNet& net);

/// Fast-path tables against Psi_naive on every point and every n; returns the largest
/// coordinate deviation.
double psi_fast_vs_naive(const OrderedNet& net);

/// Psi_n o Psi_m == Psi_min(n,m) on every point; returns the first failing (n, m, pos).
struct PsiCommutation {
  bool pass = true;
  int n = 0;
  int m = 0;
  std::size_t point = 0;
};
PsiCommutation check_Psi_commutation(const OrderedNet& net);

}  // namespace lipnet
