// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <memory>
#include <numeric>
#include <random>
#include <vector>

#include "doctest.h"
#include "lipnet/freenorm.hpp"
#include "lipnet/lipcheck.hpp"
#include "lipnet/retract_fd.hpp"

using namespace lipnet;

namespace {

std::vector<std::vector<double>> random_metric(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  std::vector<std::pair<double, double>> p(n);
  for (auto& q : p) q = {u(rng), u(rng)};
  std::vector<std::vector<double>> d(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) d[i][j] = std::hypot(p[i].first - p[j].first, p[i].second - p[j].second);
  }
  return d;
}

/// Minimal transport cost by enumerating every assignment of unit masses.
double brute_force(const std::vector<std::vector<double>>& d, const Molecule& mu) {
  std::vector<std::size_t> plus;
  std::vector<std::size_t> minus;
  for (std::size_t k = 0; k < mu.support.size(); ++k) {
    const int w = static_cast<int>(std::lround(mu.weights[k]));
    for (int i = 0; i < std::abs(w); ++i) (w > 0 ? plus : minus).push_back(mu.support[k]);
  }
  std::sort(minus.begin(), minus.end());
  double best = 1e300;
  do {
    double c = 0.0;
    for (std::size_t i = 0; i < plus.size(); ++i) c += d[plus[i]][minus[i]];
    best = std::min(best, c);
  } while (std::next_permutation(minus.begin(), minus.end()));
  return best;
}

}  // namespace

TEST_CASE("molecules") {
  CHECK_THROWS_AS((Molecule{{0, 1}, {1.0, 1.0}}).validate(), PreconditionError);
  CHECK_THROWS_AS((Molecule{{0, 0}, {1.0, -1.0}}).validate(), PreconditionError);
  const auto m = dipole(2, 5).plus(dipole(5, 2));
  CHECK(m.empty());
  CHECK(dipole(1, 3).scaled(2.0).weights == std::vector<double>{2.0, -2.0});
}

TEST_CASE("free norm of small molecules") {
  const auto d = random_metric(8, 2);
  CHECK(free_norm(d, Molecule{}).value == 0.0);
  for (std::size_t x = 0; x < 8; ++x) {
    for (std::size_t y = 0; y < 8; ++y) {
      if (x == y) continue;
      const auto r = free_norm(d, dipole(x, y));
      CHECK(r.value == doctest::Approx(d[x][y]).epsilon(1e-12));
      CHECK(r.gap <= 1e-9);
    }
  }
  const Molecule two_to_one{{0, 1, 2}, {1.0, 1.0, -2.0}};
  CHECK(free_norm(d, two_to_one).value == doctest::Approx(d[0][2] + d[1][2]));
}

TEST_CASE("free norm matches exhaustive assignment") {
  const auto d = random_metric(10, 7);
  std::mt19937_64 rng(11);
  const MoleculeSampler sampler{6, 2};
  for (int t = 0; t < 60; ++t) {
    auto mu = sampler.draw(10, rng);
    // Keep integer molecules with at most 7 unit masses per side for the enumeration.
    bool integral = true;
    double pos = 0.0;
    for (double w : mu.weights) {
      integral = integral && std::abs(w - std::round(w)) < 1e-12;
      pos += std::max(w, 0.0);
    }
    if (!integral || pos > 7.0) continue;
    const auto r = free_norm(d, mu);
    CHECK(r.value == doctest::Approx(brute_force(d, mu)).epsilon(1e-12));
    CHECK(r.gap <= kDualityTolerance);
    CHECK(r.dual_violation <= 1e-9);
  }
}

TEST_CASE("sampler respects its support cap and balances mass") {
  std::mt19937_64 rng(3);
  const MoleculeSampler sampler{4, 5};
  for (int t = 0; t < 200; ++t) {
    const auto mu = sampler.draw(20, rng);
    CHECK(mu.support.size() >= 2);
    CHECK(mu.support.size() <= 4);
    CHECK(std::is_sorted(mu.support.begin(), mu.support.end()));
    CHECK(std::abs(std::accumulate(mu.weights.begin(), mu.weights.end(), 0.0)) <= kMassTolerance);
    CHECK_NOTHROW(mu.validate());
  }
}

TEST_CASE("linearization and the basis constant") {
  auto base = std::make_shared<const SpiderwebBase>(build_spiderweb_base(2, NormKind::LInf, 1.0, 2, 0.25));
  const OrderedNet net(Spiderweb{base, {}, NetParams{1.0, 2.0}, 4});
  const auto family = net.family().truncated(30);
  const auto mu = Molecule{{3, 10, 25}, {2.0, -1.0, -1.0}};
  CHECK(linearize(family, family.size() - 1, mu).support == mu.support);
  CHECK(linearize(family, 0, mu).empty());

  const auto est = basis_constant_estimate(family, 150, 5);
  const auto lip = family_lipschitz(family);
  CHECK(est.value >= 1.0 - 1e-12);
  CHECK(est.value <= lip.max + 1e-9);
  CHECK(est.max_gap <= kDualityTolerance);
  const auto again = basis_constant_estimate(family, 150, 5);
  CHECK(again.value == est.value);
  CHECK(again.witness.support == est.witness.support);
}

TEST_CASE("identity chain on two points has constant 1") {
  auto base = std::make_shared<const SpiderwebBase>(build_spiderweb_base(1, NormKind::LInf, 1.0, 0, 0.25));
  const OrderedNet net(Spiderweb{base, {}, NetParams{1.0, 2.0}, 1});
  const auto family = net.family().truncated(2);
  CHECK(basis_constant_estimate(family, 20, 1).value == doctest::Approx(1.0));
}
