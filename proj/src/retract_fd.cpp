// SPDX-License-Identifier: Apache-2.0
#include "lipnet/retract_fd.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lipnet/parallel.hpp"

namespace lipnet {

namespace {

int shell_of_norm(double r) {
  if (r <= kTolerance) return 0;
  return static_cast<int>(std::ceil(r - kTolerance));
}

// Materialized shells S_m, built on first use, so repeated rho calls skip the rescaling.
class LayerCache {
 public:
  explicit LayerCache(const SpiderwebBase& base) : base_(base) {}
  const std::vector<Vector>& get(int m) {
    if (static_cast<std::size_t>(m) >= layers_.size()) layers_.resize(static_cast<std::size_t>(m) + 1);
    auto& slot = layers_[static_cast<std::size_t>(m)];
    if (slot.empty()) slot = base_.layer(m);
    return slot;
  }

 private:
  const SpiderwebBase& base_;
  std::vector<std::vector<Vector>> layers_;
};

// Index j in S_{n-1} of rho_n(u) / (n/(n-1)), exhaustive argmin with lexicographic ties.
std::size_t rho_index(LayerCache& cache, int n, const Vector& u) {
  return nearest_index(cache.get(n - 1), u, static_cast<double>(n) / static_cast<double>(n - 1));
}

Vector psi_cached(LayerCache& cache, int n, const Vector& x) {
  const double r = x.norm();
  if (r > n + kTolerance) throw PreconditionError("psi_n needs ||x|| <= n");
  if (r <= n - 1 + kTolerance) return x;
  if (n == 1) return Vector::zero(x.dim(), x.kind());
  const double scale = static_cast<double>(n) / static_cast<double>(n - 1);
  const Vector u = x * (static_cast<double>(n) / r);
  return (cache.get(n - 1)[rho_index(cache, n, u)] * scale) * (static_cast<double>(n - 1) / static_cast<double>(n));
}

}  // namespace

Vector rho(const SpiderwebBase& base, int n, const Vector& u) {
  if (n < 1) throw PreconditionError("rho_n needs n >= 1");
  if (std::abs(u.norm() - n) > kTolerance * std::max(1, n)) {
    throw PreconditionError("rho_n needs a point on the sphere of radius n");
  }
  if (n == 1) return Vector::zero(u.dim(), u.kind());
  LayerCache cache(base);
  return cache.get(n - 1)[rho_index(cache, n, u)] * (static_cast<double>(n) / static_cast<double>(n - 1));
}

Vector psi(const SpiderwebBase& base, int n, const Vector& x) {
  if (n < 1) throw PreconditionError("psi_n needs n >= 1");
  LayerCache cache(base);
  return psi_cached(cache, n, x);
}

Vector Psi_naive(const SpiderwebBase& base, int n, const Vector& x) {
  if (n < 0) throw PreconditionError("Psi_n needs n >= 0");
  LayerCache cache(base);
  Vector cur = x;
  for (int t = n_of(x); t > n; --t) cur = psi_cached(cache, t, cur);
  return cur;
}

BasePoint psi(const SpiderwebBase& base, int n, BasePoint p) {
  if (n < 1 || p.radius > n) throw PreconditionError("psi_n needs a base point of radius <= n");
  if (p.radius < n) return p;
  if (n == 1) return {0, 0};
  if (!is_power_of_two(n)) return {n - 1, p.index};
  return {n - 1, base.dyadic_parent(floor_log2(n), p.index)};
}

BasePoint Psi(const SpiderwebBase& base, int n, BasePoint p) {
  if (n < 0) throw PreconditionError("Psi_n needs n >= 0");
  if (p.radius <= n) return p;
  if (n == 0) return {0, 0};
  std::size_t j = p.index;
  for (int k = floor_log2(p.radius); k >= 1 && (1 << k) > n; --k) j = base.dyadic_parent(k, j);
  return {n, j};
}

double spiderweb_family_bound(const NetParams& params) {
  return (12.0 * params.b + 2.0) / params.a + 2.0;
}

OrderedNet::OrderedNet(Spiderweb web) : web_(std::move(web)) {
  if (!web_.base) throw PreconditionError("ordered net needs a spiderweb base");
  const auto& base = *web_.base;
  const int R = web_.radius;
  if (R < 0 || R > base.max_layer()) throw PreconditionError("spiderweb radius outside the materialized base");

  struct Entry {
    Vector v;
    int shell;
    std::optional<BasePoint> id;
  };
  std::vector<Entry> entries;
  for (const auto& p : base.points(R)) entries.push_back({base.point(p), p.radius, p});
  for (const auto& x : web_.extra_points) {
    if (x.dim() != base.dim() || x.kind() != base.kind()) throw DimensionMismatch("extra point shape");
    const int s = shell_of_norm(x.norm());
    if (s == 0) throw PreconditionError("extra point at the origin duplicates the base");
    if (s > R) throw PreconditionError("extra point outside the spiderweb radius");
    entries.push_back({x, s, std::nullopt});
  }
  std::stable_sort(entries.begin(), entries.end(), [](const Entry& x, const Entry& y) {
    if (x.shell != y.shell) return x.shell < y.shell;
    return lex_compare(x.v, y.v) < 0;
  });

  const std::size_t n = entries.size();
  offsets_.assign(static_cast<std::size_t>(R) + 2, n);
  shells_.resize(n);
  base_ids_.resize(n);
  base_pos_.resize(static_cast<std::size_t>(R) + 1);
  for (int m = 0; m <= R; ++m) {
    const std::size_t count = m == 0 ? 1 : base.dyadic_layer(floor_log2(m)).size();
    base_pos_[static_cast<std::size_t>(m)].assign(count, n);
  }
  std::vector<Vector> ordered;
  ordered.reserve(n);
  for (std::size_t i = n; i-- > 0;) offsets_[static_cast<std::size_t>(entries[i].shell)] = i;
  for (int m = R; m >= 0; --m) {
    offsets_[static_cast<std::size_t>(m)] =
        std::min(offsets_[static_cast<std::size_t>(m)], offsets_[static_cast<std::size_t>(m) + 1]);
  }
  for (std::size_t i = 0; i < n; ++i) {
    shells_[i] = entries[i].shell;
    base_ids_[i] = entries[i].id;
    if (entries[i].id) base_pos_[static_cast<std::size_t>(entries[i].id->radius)][entries[i].id->index] = i;
    ordered.push_back(entries[i].v);
  }
  points_ = std::make_shared<const PointSet>(PointSet::from_vectors(ordered));

  tables_.assign(static_cast<std::size_t>(R) + 1, RetractionFamily::Table(n));
  parallel_chunks(n, thread_count(), [&](std::size_t, std::size_t begin, std::size_t end) {
    LayerCache cache(base);
    for (std::size_t i = begin; i < end; ++i) {
      const int s = shells_[i];
      // Start of the base chain below shell s: the point itself or its first psi step.
      BasePoint start{};
      if (base_ids_[i]) {
        start = *base_ids_[i];
      } else if (s >= 2) {
        start = {s - 1, rho_index(cache, s, ordered[i] * (static_cast<double>(s) / ordered[i].norm()))};
      }
      for (int m = 0; m <= R; ++m) {
        std::size_t pos = i;
        if (m < s) pos = position_of(lipnet::Psi(base, m, start));
        tables_[static_cast<std::size_t>(m)][i] = static_cast<std::uint32_t>(pos);
      }
    }
  });
}

std::size_t OrderedNet::position(int n, std::size_t i) const {
  if (n < 0 || n > radius() || i < 1 || i > shell_size(n)) {
    throw PreconditionError("shell index (" + std::to_string(n) + ", " + std::to_string(i) + ") out of range");
  }
  return shell_offset(n) + i - 1;
}

std::size_t OrderedNet::position_of(BasePoint p) const {
  if (p.radius < 0 || p.radius > radius()) throw PreconditionError("base point outside the net");
  const auto pos = base_pos_[static_cast<std::size_t>(p.radius)].at(p.index);
  if (pos >= size()) throw PreconditionError("base point missing from the net");
  return pos;
}

RetractionFamily OrderedNet::family(BranchRule rule) const {
  return RetractionFamily(points_, offsets_, tables_, spiderweb_family_bound(web_.params), rule);
}

std::size_t phi_fd(const OrderedNet& net, const RetractionFamily& family, int n, std::size_t i,
                   std::size_t x) {
  return family.eval_in_level(static_cast<std::size_t>(n), net.position(n, i), x);
}

RadialGap radial_gap(const OrderedNet& net) {
  RadialGap worst;
  for (std::size_t i = 0; i < net.size(); ++i) {
    const Vector x = net.point(i);
    for (int n = 0; n < net.shell_of(i); ++n) {
      const double gap = distance(net.point(net.Psi(n, i)), radial_project(x, n));
      if (gap > worst.value) worst = {gap, i, n};
    }
  }
  return worst;
}

double psi_fast_vs_naive(const OrderedNet& net) {
  const auto& base = net.base();
  const std::size_t chunks = thread_count();
  std::vector<double> worst(chunks, 0.0);
  parallel_chunks(net.size(), chunks, [&](std::size_t c, std::size_t begin, std::size_t end) {
    LayerCache cache(base);
    for (std::size_t i = begin; i < end; ++i) {
      // Walk the literal psi chain downwards once; Psi_n(x) is the chain value after step n+1.
      Vector cur = net.point(i);
      for (int n = net.radius(); n >= 0; --n) {
        if (cur.norm() > n + kTolerance) cur = psi_cached(cache, n + 1, cur);
        const Vector fast = net.point(net.Psi(n, i));
        for (std::size_t d = 0; d < fast.dim(); ++d) worst[c] = std::max(worst[c], std::abs(fast[d] - cur[d]));
      }
    }
  });
  return *std::max_element(worst.begin(), worst.end());
}

PsiCommutation check_Psi_commutation(const OrderedNet& net) {
  for (int n = 0; n <= net.radius(); ++n) {
    for (int m = 0; m <= net.radius(); ++m) {
      const auto& lo = net.Psi_table(std::min(n, m));
      for (std::size_t i = 0; i < net.size(); ++i) {
        if (net.Psi(n, net.Psi(m, i)) != lo[i]) return {false, n, m, i};
      }
    }
  }
  return {};
}

}  // namespace lipnet
