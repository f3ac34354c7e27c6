// SPDX-License-Identifier: Apache-2.0
#include "lipnet/nets.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <string>

namespace lipnet {

namespace {

void sort_unique(std::vector<Vector>& pts, double tol) {
  std::sort(pts.begin(), pts.end(),
            [tol](const Vector& x, const Vector& y) { return lex_compare(x, y, tol) < 0; });
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [tol](const Vector& x, const Vector& y) { return approx_equal(x, y, tol); }),
            pts.end());
}

Vector random_direction(std::size_t dim, NormKind kind, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  while (true) {
    std::vector<double> c(dim);
    for (auto& v : c) v = gauss(rng);
    Vector g(std::move(c), kind);
    const double r = g.norm();
    if (r > 1e-12) return g * (1.0 / r);
  }
}

void require_separated(const std::vector<Vector>& pts, double a, const char* what) {
  if (pts.size() < 2) return;
  const auto sep = min_pairwise_distance(PointSet::from_vectors(pts));
  if (sep.distance < a - kSeparationTolerance) {
    throw PreconditionError(std::string(what) + " are not " + std::to_string(a) +
                            "-separated (found distance " + std::to_string(sep.distance) + ")");
  }
}

}  // namespace

void NetParams::validate() const {
  if (!std::isfinite(a) || !std::isfinite(b) || !(a > 0.0) || !(b > 0.0)) {
    throw PreconditionError("net parameters a and b must be finite and positive");
  }
  if (a > 2.0 * b) throw PreconditionError("net parameters must satisfy a <= 2b");
}

std::vector<Vector> sphere_candidates(std::size_t dim, NormKind kind, double radius, double mesh,
                                      double budget) {
  if (dim == 0) throw PreconditionError("dimension must be >= 1");
  if (!(mesh > 0.0) || !(radius > 0.0)) throw PreconditionError("mesh and radius must be positive");
  const double cost = static_cast<double>(dim) * std::pow(radius / mesh, static_cast<double>(dim));
  if (cost > budget) {
    throw ResourceError("candidate pool too large: dim*(radius/mesh)^dim = " + std::to_string(cost) +
                        " exceeds budget " + std::to_string(budget));
  }
  const auto reach = static_cast<long>(std::ceil((radius + mesh) / mesh));
  std::vector<long> z(dim, -reach);
  std::vector<Vector> out;
  std::vector<double> p(dim);
  while (true) {
    for (std::size_t i = 0; i < dim; ++i) p[i] = static_cast<double>(z[i]) * mesh;
    const double r = norm_of(p, kind);
    if (r > 0.0 && std::abs(r - radius) <= mesh + 1e-12) {
      std::vector<double> q(dim);
      for (std::size_t i = 0; i < dim; ++i) q[i] = (p[i] * radius) / r;
      out.emplace_back(std::move(q), kind);
    }
    std::size_t axis = 0;
    while (axis < dim) {
      if (z[axis] < reach) {
        ++z[axis];
        break;
      }
      z[axis] = -reach;
      ++axis;
    }
    if (axis == dim) break;
  }
  sort_unique(out, 1e-12 * std::max(1.0, radius));
  return out;
}

double candidate_covering_radius(const std::vector<Vector>& candidates, double radius,
                                 std::size_t samples, std::uint64_t seed) {
  if (candidates.empty()) throw PreconditionError("empty candidate pool");
  const auto set = PointSet::from_vectors(candidates);
  const NearestSearch search(set, std::max(radius / 8.0, 1e-3));
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    const auto u = random_direction(candidates.front().dim(), candidates.front().kind(), rng) * radius;
    worst = std::max(worst, search.nearest(u.coords().data()).distance);
  }
  return worst;
}

std::vector<Vector> greedy_separated(const std::vector<Vector>& candidates, double a,
                                     const std::vector<Vector>& seeds) {
  if (!(a > 0.0)) throw PreconditionError("separation must be positive");
  require_separated(seeds, a, "seeds");
  std::vector<Vector> accepted = seeds;
  if (candidates.empty()) return accepted;
  const auto dim = candidates.front().dim();
  GridIndex grid(dim, a);
  for (std::size_t i = 0; i < accepted.size(); ++i) grid.insert(i, accepted[i].coords().data());
  for (const auto& c : candidates) {
    bool ok = true;
    grid.for_each_in_box(c.coords().data(), a, [&](std::size_t id) {
      if (ok && distance(c, accepted[id]) < a - kSeparationTolerance) ok = false;
    });
    if (!ok) continue;
    grid.insert(accepted.size(), c.coords().data());
    accepted.push_back(c);
  }
  return accepted;
}

int floor_log2(int m) {
  if (m < 1) throw PreconditionError("floor_log2 needs m >= 1");
  int k = 0;
  while ((m >> (k + 1)) != 0) ++k;
  return k;
}

bool is_power_of_two(int m) { return m >= 1 && (m & (m - 1)) == 0; }

SpiderwebBase::SpiderwebBase(std::size_t dim, NormKind kind, NetParams params,
                             std::vector<std::vector<Vector>> dyadic_layers, double mesh,
                             double covering_radius)
    : dim_(dim),
      kind_(kind),
      params_(params),
      layers_(std::move(dyadic_layers)),
      mesh_(mesh),
      covering_(covering_radius) {
  params_.validate();
  if (layers_.empty()) throw PreconditionError("spiderweb base needs at least S_1");
  for (std::size_t k = 0; k < layers_.size(); ++k) {
    const double r = std::ldexp(1.0, static_cast<int>(k));
    if (layers_[k].empty()) throw PreconditionError("empty dyadic layer");
    for (const auto& p : layers_[k]) {
      if (p.dim() != dim_ || p.kind() != kind_) throw DimensionMismatch("layer point shape");
      if (std::abs(p.norm() - r) > kTolerance * std::max(1.0, r)) {
        throw PreconditionError("layer point off its sphere of radius " + std::to_string(r));
      }
    }
    require_separated(layers_[k], params_.a, "dyadic layer points");
    if (k > 0) {
      const auto& prev = layers_[k - 1];
      if (prev.size() > layers_[k].size()) throw PreconditionError("2 S_{2^k} must be contained in S_{2^{k+1}}");
      for (std::size_t j = 0; j < prev.size(); ++j) {
        if (!approx_equal(prev[j] * 2.0, layers_[k][j], 1e-12 * r)) {
          throw PreconditionError("2 S_{2^k} must be the leading points of S_{2^{k+1}}");
        }
      }
    }
  }
  parents_.resize(layers_.size());
  for (std::size_t k = 1; k < layers_.size(); ++k) {
    const auto& coarse = layers_[k - 1];
    auto& par = parents_[k];
    par.resize(layers_[k].size());
    for (std::size_t j = 0; j < layers_[k].size(); ++j) {
      par[j] = j < coarse.size() ? j : nearest_index(coarse, layers_[k][j], 2.0);
    }
  }
}

std::vector<Vector> SpiderwebBase::layer(int m) const {
  if (m < 1 || m > max_layer()) {
    throw PreconditionError("layer " + std::to_string(m) + " outside the materialized range 1.." +
                            std::to_string(max_layer()));
  }
  const int k = floor_log2(m);
  const auto& base = layers_[static_cast<std::size_t>(k)];
  if (m == (1 << k)) return base;
  const double scale = static_cast<double>(m) / static_cast<double>(1 << k);
  std::vector<Vector> out;
  out.reserve(base.size());
  for (const auto& p : base) out.push_back(p * scale);
  return out;
}

Vector SpiderwebBase::point(BasePoint p) const {
  if (p.radius == 0) return Vector::zero(dim_, kind_);
  if (p.radius < 0 || p.radius > max_layer()) throw PreconditionError("base point radius out of range");
  const int k = floor_log2(p.radius);
  const auto& v = layers_[static_cast<std::size_t>(k)].at(p.index);
  if (p.radius == (1 << k)) return v;
  return v * (static_cast<double>(p.radius) / static_cast<double>(1 << k));
}

std::vector<BasePoint> SpiderwebBase::points(int max_radius) const {
  if (max_radius < 0 || max_radius > max_layer()) throw PreconditionError("radius outside the materialized range");
  std::vector<BasePoint> out{{0, 0}};
  for (int m = 1; m <= max_radius; ++m) {
    const auto count = layers_[static_cast<std::size_t>(floor_log2(m))].size();
    for (std::size_t j = 0; j < count; ++j) out.push_back({m, j});
  }
  return out;
}

SpiderwebBase build_spiderweb_base(std::size_t dim, NormKind kind, double a, int max_level,
                                   double mesh, const BaseBuildOptions& options) {
  if (!(a > 0.0) || !(a < 2.0)) throw PreconditionError("spiderweb separation must lie in (0, 2)");
  if (max_level < 0 || max_level > 20) throw PreconditionError("max dyadic level must lie in 0..20");
  std::vector<std::vector<Vector>> layers;
  double covering = 0.0;
  for (int k = 0; k <= max_level; ++k) {
    const double r = std::ldexp(1.0, k);
    const auto candidates = sphere_candidates(dim, kind, r, mesh, options.budget);
    if (options.covering_samples > 0) {
      covering = std::max(covering, candidate_covering_radius(candidates, r, options.covering_samples,
                                                              options.seed + static_cast<std::uint64_t>(k)));
    }
    std::vector<Vector> seeds;
    if (k > 0) {
      for (const auto& p : layers.back()) seeds.push_back(p * 2.0);
    }
    layers.push_back(greedy_separated(candidates, a, seeds));
  }
  return SpiderwebBase(dim, kind, NetParams{a, 2.0 * a}, std::move(layers), mesh, covering);
}

std::vector<Vector> layer(const SpiderwebBase& base, int m) { return base.layer(m); }

std::vector<Vector> Spiderweb::all_points() const {
  std::vector<Vector> out;
  for (const auto& p : base->points(radius)) out.push_back(base->point(p));
  out.insert(out.end(), extra_points.begin(), extra_points.end());
  return out;
}

std::vector<Vector> RegionSampler::sample() const {
  if (count == 0) throw PreconditionError("region sampler with no samples");
  if (dim == 0 || !(radius > 0.0)) throw PreconditionError("region sampler needs dim >= 1 and radius > 0");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::exponential_distribution<double> expo(1.0);
  std::vector<Vector> out;
  out.reserve(count);
  for (std::size_t s = 0; s < count; ++s) {
    switch (kind) {
      case RegionKind::Sphere:
        out.push_back(random_direction(dim, norm, rng) * radius);
        break;
      case RegionKind::Box: {
        std::vector<double> c(dim);
        for (auto& v : c) v = radius * (2.0 * unit(rng) - 1.0);
        out.emplace_back(std::move(c), norm);
        break;
      }
      case RegionKind::Ball: {
        std::vector<double> c(dim);
        if (norm == NormKind::LInf) {
          for (auto& v : c) v = radius * (2.0 * unit(rng) - 1.0);
        } else if (norm == NormKind::L1) {
          double total = expo(rng);
          for (auto& v : c) {
            v = expo(rng);
            total += v;
          }
          for (auto& v : c) v = radius * v / total * (unit(rng) < 0.5 ? -1.0 : 1.0);
        } else {
          const auto dir = random_direction(dim, norm, rng);
          const double r = radius * std::pow(unit(rng), 1.0 / static_cast<double>(dim));
          for (std::size_t i = 0; i < dim; ++i) c[i] = dir[i] * r;
        }
        out.emplace_back(std::move(c), norm);
        break;
      }
    }
  }
  return out;
}

SeparationResult min_pairwise_distance(const PointSet& points) {
  SeparationResult best;
  if (points.size() < 2) return best;
  // Cell size from the bounding box keeps the index small for sparse inputs.
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (double c : points.flat()) {
    lo = std::min(lo, c);
    hi = std::max(hi, c);
  }
  const double cell = std::max((hi - lo) / std::cbrt(static_cast<double>(points.size())), 1e-6);
  const NearestSearch search(points, cell);
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto hit = search.nearest(points.row(i), i);
    const auto a = std::min(i, hit.index);
    const auto b = std::max(i, hit.index);
    if (hit.distance < best.distance ||
        (hit.distance == best.distance && std::pair{a, b} < std::pair{best.first, best.second})) {
      best = {hit.distance, a, b};
    }
  }
  return best;
}

NetReport validate_net(const std::vector<Vector>& points, const RegionSampler& region,
                       const NetParams& params) {
  if (points.empty()) throw PreconditionError("validate_net needs at least one point");
  params.validate();
  const auto samples = region.sample();
  const auto set = PointSet::from_vectors(points);
  NetReport report;
  const auto sep = min_pairwise_distance(set);
  report.min_pairwise_distance = sep.distance;
  report.closest_pair_first = sep.first;
  report.closest_pair_second = sep.second;
  const NearestSearch search(set, std::max(params.a, 1e-6));
  for (const auto& s : samples) {
    report.max_sample_to_net_distance =
        std::max(report.max_sample_to_net_distance, search.nearest(s.coords().data()).distance);
  }
  report.separated = report.min_pairwise_distance >= params.a - kSeparationTolerance;
  report.dense = report.max_sample_to_net_distance <= params.b + kTolerance;
  return report;
}

std::vector<Vector> random_net(std::size_t dim, NormKind kind, double a, double radius,
                               std::uint64_t seed, std::size_t samples_per_unit_volume) {
  if (!(a > 0.0) || !(radius > 0.0)) throw PreconditionError("random_net needs a > 0 and radius > 0");
  const double volume = std::pow(2.0 * radius / a, static_cast<double>(dim));
  const auto count = static_cast<std::size_t>(volume * static_cast<double>(samples_per_unit_volume));
  if (count > 50'000'000) throw ResourceError("random_net sample count too large");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::vector<Vector> samples;
  samples.reserve(count);
  for (std::size_t s = 0; s < count; ++s) {
    std::vector<double> c(dim);
    for (auto& v : c) v = radius * unit(rng);
    Vector v(std::move(c), kind);
    if (v.norm() <= radius) samples.push_back(std::move(v));
  }
  return greedy_separated(samples, a, {});
}

bool LipschitzEquivalence::is_bijection() const {
  if (forward.size() != domain.size() || domain.size() != codomain.size()) return false;
  std::vector<bool> hit(codomain.size(), false);
  for (auto f : forward) {
    if (f >= codomain.size() || hit[f]) return false;
    hit[f] = true;
  }
  return true;
}

LipschitzEquivalence LipschitzEquivalence::inverse() const {
  if (!is_bijection()) throw PreconditionError("equivalence table is not a bijection");
  LipschitzEquivalence inv;
  inv.domain = codomain;
  inv.codomain = domain;
  inv.forward.resize(forward.size());
  for (std::size_t i = 0; i < forward.size(); ++i) inv.forward[forward[i]] = i;
  inv.forward_lipschitz = backward_lipschitz;
  inv.backward_lipschitz = forward_lipschitz;
  return inv;
}

void LipschitzEquivalence::measure() {
  if (!is_bijection()) throw PreconditionError("equivalence table is not a bijection");
  double fwd = domain.size() < 2 ? 1.0 : 0.0;
  double bwd = fwd;
  for (std::size_t i = 0; i < domain.size(); ++i) {
    for (std::size_t j = i + 1; j < domain.size(); ++j) {
      const double d = distance(domain[i], domain[j]);
      const double e = distance(codomain[forward[i]], codomain[forward[j]]);
      fwd = std::max(fwd, e / d);
      bwd = std::max(bwd, d / e);
    }
  }
  forward_lipschitz = fwd;
  backward_lipschitz = bwd;
}

SpiderwebTransfer net_to_spiderweb(const std::vector<Vector>& net, const NetParams& params,
                                   std::shared_ptr<const SpiderwebBase> base, int base_radius) {
  params.validate();
  if (net.empty()) throw PreconditionError("net_to_spiderweb needs a nonempty net");
  if (!base) throw PreconditionError("net_to_spiderweb needs a base");
  if (std::abs(base->params().a - 1.0) > kTolerance || std::abs(base->params().b - 2.0) > kTolerance) {
    throw PreconditionError("net_to_spiderweb needs a base with parameters (1, 2)");
  }
  if (base_radius < 0 || base_radius > base->max_layer()) {
    throw PreconditionError("base radius outside the materialized base");
  }
  SpiderwebTransfer out;
  out.scale = 1.0 / (3.0 * params.b);
  constexpr double kDensity = 1.0 / 3.0;

  std::vector<Vector> scaled;
  scaled.reserve(net.size());
  for (const auto& x : net) scaled.push_back(x * out.scale);
  const auto scaled_set = PointSet::from_vectors(scaled);
  const NearestSearch search(scaled_set, std::max(params.a * out.scale, 1e-6));

  const auto base_points = base->points(base_radius);
  std::vector<Vector> base_vectors;
  base_vectors.reserve(base_points.size());
  // owner[i] = base point matched to scaled net point i.
  std::map<std::size_t, std::size_t> owner;
  for (std::size_t k = 0; k < base_points.size(); ++k) {
    base_vectors.push_back(base->point(base_points[k]));
    const auto hit = search.nearest_lex(base_vectors.back().coords().data());
    if (hit.distance > kDensity + kTolerance) {
      throw PreconditionError("base coverage insufficient: base point at distance " +
                              std::to_string(hit.distance) + " from the rescaled net");
    }
    if (!owner.emplace(hit.index, k).second) {
      throw PreconditionError("nearest point map is not injective; the net is not " +
                              std::to_string(params.a) + "-separated");
    }
  }
  out.matched = owner.size();

  // Spiderweb: the base points, then unmatched net points inside the truncation radius.
  std::vector<Vector> extras;
  std::vector<std::size_t> domain_index;
  std::vector<std::size_t> image;
  const std::size_t nb = base_vectors.size();
  for (std::size_t i = 0; i < scaled.size(); ++i) {
    if (auto it = owner.find(i); it != owner.end()) {
      domain_index.push_back(i);
      image.push_back(it->second);
    } else if (scaled[i].norm() <= static_cast<double>(base_radius) + kTolerance) {
      domain_index.push_back(i);
      image.push_back(nb + extras.size());
      extras.push_back(scaled[i]);
    }
  }

  out.spiderweb.base = base;
  out.spiderweb.extra_points = extras;
  out.spiderweb.params = NetParams{params.a * out.scale / 2.0, 2.0};
  out.spiderweb.radius = base_radius;

  auto& eq = out.equivalence;
  for (auto i : domain_index) eq.domain.push_back(scaled[i]);
  eq.codomain = base_vectors;
  eq.codomain.insert(eq.codomain.end(), extras.begin(), extras.end());
  eq.forward = image;
  if (!eq.is_bijection()) throw PreconditionError("spiderweb transfer did not produce a bijection");
  for (std::size_t i = 0; i < eq.domain.size(); ++i) {
    out.max_displacement = std::max(out.max_displacement, distance(eq.domain[i], eq.codomain[eq.forward[i]]));
  }
  eq.measure();
  return out;
}

RetractionFamily transport_basis(const LipschitzEquivalence& eq, const RetractionFamily& family) {
  if (!eq.is_bijection()) throw PreconditionError("equivalence table is not a bijection");
  const auto& pts = family.points();
  if (eq.domain.size() != pts.size() || pts.metric().is_block_sum()) {
    throw DimensionMismatch("equivalence domain differs from the family's point set");
  }
  const auto domain_set = PointSet::from_vectors(eq.domain);
  const NearestSearch search(domain_set, 0.5);
  std::vector<bool> used(eq.domain.size(), false);
  std::vector<Vector> images;
  images.reserve(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto hit = search.nearest(pts.row(i));
    if (hit.distance > kTolerance || used[hit.index]) {
      throw DimensionMismatch("family point " + std::to_string(i) + " is not in the equivalence domain");
    }
    used[hit.index] = true;
    images.push_back(eq.codomain[eq.forward[hit.index]]);
  }
  auto moved = std::make_shared<const PointSet>(PointSet::from_vectors(images));
  return family.with_points(std::move(moved), eq.distortion() * family.theoretical_bound());
}

}  // namespace lipnet
