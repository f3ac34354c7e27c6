// SPDX-License-Identifier: Apache-2.0
#include "lipnet/freenorm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <set>

#include "lipnet/parallel.hpp"

namespace lipnet {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

void Molecule::validate() const {
  if (support.size() != weights.size()) throw PreconditionError("molecule support and weights differ in size");
  if (std::set<std::size_t>(support.begin(), support.end()).size() != support.size()) {
    throw PreconditionError("molecule support has repeated points");
  }
  double total = 0.0;
  double scale = 0.0;
  for (double w : weights) {
    if (!std::isfinite(w)) throw PreconditionError("molecule weight is not finite");
    total += w;
    scale = std::max(scale, std::abs(w));
  }
  if (std::abs(total) > kMassTolerance * std::max(1.0, scale)) throw PreconditionError("unbalanced molecule");
}

Molecule Molecule::scaled(double t) const {
  Molecule m = *this;
  for (auto& w : m.weights) w *= t;
  return m;
}

Molecule Molecule::plus(const Molecule& other) const {
  std::map<std::size_t, double> acc;
  for (std::size_t i = 0; i < support.size(); ++i) acc[support[i]] += weights[i];
  for (std::size_t i = 0; i < other.support.size(); ++i) acc[other.support[i]] += other.weights[i];
  Molecule m;
  for (const auto& [x, w] : acc) {
    if (w != 0.0) {
      m.support.push_back(x);
      m.weights.push_back(w);
    }
  }
  return m;
}

Molecule dipole(std::size_t x, std::size_t y) {
  if (x == y) return {};
  return {{x, y}, {1.0, -1.0}};
}

FreeNormResult free_norm(const DistanceFn& distance, const Molecule& mu) {
  mu.validate();
  std::vector<std::size_t> pos;
  std::vector<std::size_t> neg;
  double mass = 0.0;
  for (std::size_t i = 0; i < mu.support.size(); ++i) {
    if (mu.weights[i] > 0.0) pos.push_back(i);
    if (mu.weights[i] < 0.0) neg.push_back(i);
    mass += std::abs(mu.weights[i]);
  }
  FreeNormResult out;
  out.potentials.assign(mu.support.size(), 0.0);
  if (pos.empty() || neg.empty()) return out;

  const std::size_t P = pos.size();
  const std::size_t Q = neg.size();
  const double eps = 1e-14 * mass;
  std::vector<std::vector<double>> d(P, std::vector<double>(Q));
  for (std::size_t p = 0; p < P; ++p) {
    for (std::size_t q = 0; q < Q; ++q) {
      d[p][q] = distance(mu.support[pos[p]], mu.support[neg[q]]);
      if (!(d[p][q] >= 0.0)) throw PreconditionError("distance must be nonnegative");
      if (d[p][q] == 0.0 && mu.support[pos[p]] != mu.support[neg[q]]) {
        throw PreconditionError("metric is not positive-definite on the support");
      }
    }
  }
  std::vector<double> supply(P);
  std::vector<double> demand(Q);
  for (std::size_t p = 0; p < P; ++p) supply[p] = mu.weights[pos[p]];
  for (std::size_t q = 0; q < Q; ++q) demand[q] = -mu.weights[neg[q]];
  std::vector<std::vector<double>> flow(P, std::vector<double>(Q, 0.0));

  // Node layout: 0 = super source, 1..P sources, P+1..P+Q sinks, P+Q+1 = super sink.
  const std::size_t V = P + Q + 2;
  const std::size_t S = 0;
  const std::size_t T = V - 1;
  std::vector<double> pi(V, 0.0);
  std::vector<double> used(P, 0.0);
  std::vector<double> served(Q, 0.0);

  auto residual_supply = [&](std::size_t p) { return supply[p] - used[p]; };
  auto residual_demand = [&](std::size_t q) { return demand[q] - served[q]; };

  double remaining = std::accumulate(supply.begin(), supply.end(), 0.0);
  std::size_t guard = 0;
  while (remaining > eps) {
    if (++guard > 4 * (P + 1) * (Q + 1) + 16) throw ResourceError("min-cost flow did not converge");
    std::vector<double> dist(V, kInf);
    std::vector<std::size_t> prev(V, V);
    std::vector<char> done(V, 0);
    dist[S] = 0.0;
    auto relax = [&](std::size_t u, std::size_t v, double cost) {
      const double reduced = std::max(0.0, cost + pi[u] - pi[v]);
      if (dist[u] + reduced < dist[v]) {
        dist[v] = dist[u] + reduced;
        prev[v] = u;
      }
    };
    for (std::size_t iter = 0; iter < V; ++iter) {
      std::size_t u = V;
      for (std::size_t v = 0; v < V; ++v) {
        if (!done[v] && dist[v] < kInf && (u == V || dist[v] < dist[u])) u = v;
      }
      if (u == V) break;
      done[u] = 1;
      if (u == S) {
        for (std::size_t p = 0; p < P; ++p) {
          if (residual_supply(p) > eps) relax(S, 1 + p, 0.0);
        }
      } else if (u <= P) {
        const std::size_t p = u - 1;
        for (std::size_t q = 0; q < Q; ++q) relax(u, 1 + P + q, d[p][q]);
        if (used[p] > eps) relax(u, S, 0.0);
      } else if (u < T) {
        const std::size_t q = u - 1 - P;
        for (std::size_t p = 0; p < P; ++p) {
          if (flow[p][q] > eps) relax(u, 1 + p, -d[p][q]);
        }
        if (residual_demand(q) > eps) relax(u, T, 0.0);
      } else {
        for (std::size_t q = 0; q < Q; ++q) {
          if (served[q] > eps) relax(T, 1 + P + q, 0.0);
        }
      }
    }
    if (dist[T] == kInf) throw PreconditionError("unbalanced molecule");
    for (std::size_t v = 0; v < V; ++v) pi[v] += std::min(dist[v], dist[T]);

    double push = kInf;
    for (std::size_t v = T; v != S; v = prev[v]) {
      const std::size_t u = prev[v];
      if (u == S) {
        push = std::min(push, residual_supply(v - 1));
      } else if (v == T) {
        push = std::min(push, residual_demand(u - 1 - P));
      } else if (u > P && v >= 1 && v <= P) {
        push = std::min(push, flow[v - 1][u - 1 - P]);
      }
    }
    for (std::size_t v = T; v != S; v = prev[v]) {
      const std::size_t u = prev[v];
      if (u == S) {
        used[v - 1] += push;
      } else if (v == T) {
        served[u - 1 - P] += push;
      } else if (u >= 1 && u <= P) {
        flow[u - 1][v - 1 - P] += push;
      } else {
        flow[v - 1][u - 1 - P] -= push;
      }
    }
    remaining -= push;
  }

  for (std::size_t p = 0; p < P; ++p) {
    for (std::size_t q = 0; q < Q; ++q) {
      if (flow[p][q] > eps) {
        out.plan.flows.push_back({mu.support[pos[p]], mu.support[neg[q]], flow[p][q]});
        out.plan.cost += flow[p][q] * d[p][q];
      }
    }
  }
  out.value = out.plan.cost;
  // Potentials g(x) = pi; feasibility g(q) - g(p) <= d(p, q) makes the dual a lower bound.
  for (std::size_t p = 0; p < P; ++p) out.potentials[pos[p]] = pi[1 + p];
  for (std::size_t q = 0; q < Q; ++q) out.potentials[neg[q]] = pi[1 + P + q];
  out.dual_violation = -kInf;
  for (std::size_t p = 0; p < P; ++p) {
    out.dual -= supply[p] * pi[1 + p];
    for (std::size_t q = 0; q < Q; ++q) {
      out.dual_violation = std::max(out.dual_violation, pi[1 + P + q] - pi[1 + p] - d[p][q]);
    }
  }
  for (std::size_t q = 0; q < Q; ++q) out.dual += demand[q] * pi[1 + P + q];
  out.gap = std::abs(out.value - out.dual);
  return out;
}

FreeNormResult free_norm(const PointSet& points, const Molecule& mu) {
  for (auto x : mu.support) {
    if (x >= points.size()) throw PreconditionError("molecule support outside the point set");
  }
  return free_norm([&](std::size_t i, std::size_t j) { return points.distance(i, j); }, mu);
}

FreeNormResult free_norm(const std::vector<std::vector<double>>& distances, const Molecule& mu) {
  for (auto x : mu.support) {
    if (x >= distances.size() || distances[x].size() != distances.size()) {
      throw PreconditionError("molecule support outside the distance matrix");
    }
  }
  return free_norm([&](std::size_t i, std::size_t j) { return distances[i][j]; }, mu);
}

Molecule linearize(const RetractionFamily& family, std::size_t index, const Molecule& mu) {
  mu.validate();
  std::map<std::size_t, double> acc;
  for (std::size_t i = 0; i < mu.support.size(); ++i) {
    if (mu.support[i] >= family.size()) throw PreconditionError("molecule support outside the family");
    acc[family.eval(index, mu.support[i])] += mu.weights[i];
  }
  Molecule out;
  double scale = 0.0;
  for (double w : mu.weights) scale = std::max(scale, std::abs(w));
  for (const auto& [x, w] : acc) {
    // Collided weights that cancel up to rounding count as zero.
    if (std::abs(w) > kMassTolerance * scale) {
      out.support.push_back(x);
      out.weights.push_back(w);
    }
  }
  return out;
}

Molecule MoleculeSampler::draw(std::size_t point_count, std::mt19937_64& rng) const {
  if (point_count < 2) throw PreconditionError("molecules need at least two points");
  if (max_support < 2 || weight_range < 1) throw PreconditionError("molecule sampler parameters");
  const std::size_t cap = std::min(max_support, point_count);
  std::uniform_int_distribution<std::size_t> size_dist(2, cap);
  std::uniform_int_distribution<int> weight_dist(-weight_range, weight_range);
  while (true) {
    const std::size_t k = size_dist(rng);
    std::vector<std::size_t> all(point_count);
    std::iota(all.begin(), all.end(), std::size_t{0});
    // Partial Fisher-Yates for a uniform k-subset.
    for (std::size_t i = 0; i < k; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, point_count - 1);
      std::swap(all[i], all[pick(rng)]);
    }
    Molecule m;
    m.support.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k));
    std::sort(m.support.begin(), m.support.end());
    double total = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      m.weights.push_back(weight_dist(rng));
      total += m.weights.back();
    }
    const double mean = total / static_cast<double>(k);
    bool nonzero = false;
    for (auto& w : m.weights) {
      w -= mean;
      nonzero = nonzero || std::abs(w) > 1e-9;
    }
    // Remove the rounding residue of the mean subtraction from the last weight.
    m.weights.back() -= std::accumulate(m.weights.begin(), m.weights.end(), 0.0);
    if (nonzero) return m;
  }
}

BasisConstantEstimate basis_constant_estimate(const RetractionFamily& family, std::size_t samples,
                                              std::uint64_t seed, const MoleculeSampler& sampler) {
  const std::size_t n = family.size();
  BasisConstantEstimate out;
  out.samples = samples;
  out.seed = seed;
  out.per_index.assign(n, 0.0);
  if (n < 2 || samples == 0) return out;

  std::mt19937_64 rng(seed);
  std::vector<Molecule> mols;
  mols.reserve(samples);
  for (std::size_t i = 0; i < samples; ++i) mols.push_back(sampler.draw(n, rng));

  struct Best {
    std::vector<double> per_index;
    double value = 0.0;
    std::size_t sample = 0;
    std::size_t index = 0;
    double gap = 0.0;
  };
  const std::size_t chunks = thread_count();
  std::vector<Best> parts(chunks);
  parallel_chunks(samples, chunks, [&](std::size_t c, std::size_t begin, std::size_t end) {
    auto& best = parts[c];
    best.per_index.assign(n, 0.0);
    best.sample = samples;
    for (std::size_t s = begin; s < end; ++s) {
      const auto base = free_norm(family.points(), mols[s]);
      best.gap = std::max(best.gap, base.gap);
      for (std::size_t idx = 0; idx < n; ++idx) {
        const auto image = free_norm(family.points(), linearize(family, idx, mols[s]));
        best.gap = std::max(best.gap, image.gap);
        const double ratio = image.value / base.value;
        best.per_index[idx] = std::max(best.per_index[idx], ratio);
        if (ratio > best.value) {
          best.value = ratio;
          best.sample = s;
          best.index = idx;
        }
      }
    }
  });
  // Chunks are in sample order, so strict improvement keeps the earliest witness.
  std::size_t best_sample = samples;
  for (const auto& part : parts) {
    if (part.per_index.empty()) continue;
    for (std::size_t i = 0; i < n; ++i) out.per_index[i] = std::max(out.per_index[i], part.per_index[i]);
    out.max_gap = std::max(out.max_gap, part.gap);
    if (part.sample < samples && part.value > out.value) {
      out.value = part.value;
      out.index = part.index;
      best_sample = part.sample;
    }
  }
  if (best_sample < samples) out.witness = mols[best_sample];
  return out;
}

}  // namespace lipnet
