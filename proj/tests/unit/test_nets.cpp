// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <memory>
#include <set>
#include <vector>

#include "doctest.h"
#include "lipnet/lipcheck.hpp"
#include "lipnet/nets.hpp"
#include "lipnet/retract_fd.hpp"

using namespace lipnet;

namespace {

std::vector<double> firsts(const std::vector<Vector>& v) {
  std::vector<double> out;
  for (const auto& x : v) out.push_back(x[0]);
  return out;
}

}  // namespace

TEST_CASE("sphere candidates") {
  CHECK(firsts(sphere_candidates(1, NormKind::L2, 3.0, 0.5)) == std::vector<double>{-3.0, 3.0});
  // Projections of the lattice points with norm in [0.5, 1.5]: the 16 points of the norm-1 ring
  // plus 16 thirds from the norm-1.5 ring.
  const auto square = sphere_candidates(2, NormKind::LInf, 1.0, 0.5);
  CHECK(square.size() == 32);
  for (const auto& p : square) {
    CHECK(p.norm() == doctest::Approx(1.0));
    const bool halves = std::fmod(std::abs(p[0]) * 2.0, 1.0) == 0.0 && std::fmod(std::abs(p[1]) * 2.0, 1.0) == 0.0;
    const bool thirds = std::abs(std::round(p[0] * 3.0) - p[0] * 3.0) < 1e-12 &&
                        std::abs(std::round(p[1] * 3.0) - p[1] * 3.0) < 1e-12;
    CHECK((halves || thirds));
  }
  for (int i = -1; i <= 1; ++i) {
    for (int j = -1; j <= 1; ++j) {
      if (i == 0 && j == 0) continue;
      const Vector corner({1.0 * i, 1.0 * j}, NormKind::LInf);
      bool found = false;
      for (const auto& p : square) found = found || approx_equal(p, corner);
      CHECK(found);
    }
  }
  const auto coarse = sphere_candidates(3, NormKind::L2, 1.0, 5.0);
  CHECK(coarse.size() >= 6);
}

TEST_CASE("greedy separation") {
  auto v = [](double x) { return Vector({x}, NormKind::L2); };
  CHECK(firsts(greedy_separated({v(0), v(0.5), v(1.2)}, 1.0, {})) == std::vector<double>{0, 1.2});
  CHECK(firsts(greedy_separated({}, 1.0, {v(7)})) == std::vector<double>{7});
  CHECK(firsts(greedy_separated({v(1.0), v(0.9), v(3.0)}, 1.0, {v(0), v(2)})) ==
        std::vector<double>{0, 2, 1.0, 3.0});
}

TEST_CASE("one dimensional spiderweb base") {
  const auto base = build_spiderweb_base(1, NormKind::LInf, 1.0, 2, 0.25);
  CHECK(firsts(base.dyadic_layer(0)) == std::vector<double>{-1, 1});
  CHECK(firsts(base.dyadic_layer(1)) == std::vector<double>{-2, 2});
  CHECK(firsts(base.dyadic_layer(2)) == std::vector<double>{-4, 4});
  CHECK(firsts(base.layer(3)) == std::vector<double>{-3, 3});
  std::set<double> all;
  for (const auto& p : base.points(4)) all.insert(base.point(p)[0]);
  CHECK(all == std::set<double>{-4, -3, -2, -1, 0, 1, 2, 3, 4});
}

TEST_CASE("two dimensional base layers are separated and nested") {
  for (auto kind : {NormKind::LInf, NormKind::L2}) {
    const auto base = build_spiderweb_base(2, kind, 1.0, 2, 0.25);
    for (int k = 0; k <= base.max_level(); ++k) {
      const auto& layer = base.dyadic_layer(k);
      for (std::size_t i = 0; i < layer.size(); ++i) {
        CHECK(layer[i].norm() == doctest::Approx(std::ldexp(1.0, k)));
        for (std::size_t j = i + 1; j < layer.size(); ++j) CHECK(distance(layer[i], layer[j]) >= 1.0 - 1e-12);
      }
      if (k > 0) {
        const auto& prev = base.dyadic_layer(k - 1);
        for (std::size_t i = 0; i < prev.size(); ++i) CHECK(approx_equal(layer[i], prev[i] * 2.0));
      }
    }
  }
}

TEST_CASE("validate_net on the integers") {
  std::vector<Vector> z;
  for (int i = -12; i <= 12; ++i) z.push_back(Vector({static_cast<double>(i)}, NormKind::L2));
  const RegionSampler region{RegionKind::Box, 1, NormKind::L2, 10.0, 2000, 3};
  const auto r = validate_net(z, region, NetParams{1.0, 0.5});
  CHECK(r.min_pairwise_distance == 1.0);
  CHECK(r.max_sample_to_net_distance <= 0.5);
  CHECK(r.pass());
  const auto single = validate_net({Vector({0.0}, NormKind::L2)}, RegionSampler{RegionKind::Ball, 1, NormKind::L2, 0.1, 10, 1},
                                   NetParams{1.0, 2.0});
  CHECK(std::isinf(single.min_pairwise_distance));
  CHECK(single.separated);
}

TEST_CASE("random nets are separated") {
  const auto net = random_net(2, NormKind::LInf, 1.0, 5.0, 11);
  CHECK(min_pairwise_distance(PointSet::from_vectors(net)).distance >= 1.0 - 1e-12);
  CHECK(random_net(2, NormKind::LInf, 1.0, 5.0, 11) == net);
}

TEST_CASE("net to spiderweb transfer") {
  auto base = std::make_shared<const SpiderwebBase>(build_spiderweb_base(1, NormKind::LInf, 1.0, 1, 0.25));

  SUBCASE("a net equal to the rescaled base maps by the identity") {
    // With b = 1/3 the rescaling by 1/(3b) is the identity.
    std::vector<Vector> net;
    for (int i = -2; i <= 2; ++i) net.push_back(Vector({1.0 * i}, NormKind::LInf));
    const auto t = net_to_spiderweb(net, NetParams{2.0 / 3.0, 1.0 / 3.0}, base, 2);
    CHECK(t.equivalence.distortion() == doctest::Approx(1.0));
    CHECK(t.max_displacement == doctest::Approx(0.0));
    CHECK(t.spiderweb.all_points().size() == 5);
  }

  SUBCASE("a stretched 1-D net") {
    std::vector<Vector> net;
    for (int i = -6; i <= 6; ++i) net.push_back(Vector({1.1 * i}, NormKind::LInf));
    const NetParams p{1.1, 2.0};
    const auto t = net_to_spiderweb(net, p, base, 1);
    CHECK(t.max_displacement <= 1.0 / 3.0 + 1e-12);
    CHECK(t.equivalence.is_bijection());
    // Exhaustive pairwise oracle for the distortion.
    const auto& eq = t.equivalence;
    double fwd = 0.0;
    double bwd = 0.0;
    for (std::size_t i = 0; i < eq.domain.size(); ++i) {
      for (std::size_t j = i + 1; j < eq.domain.size(); ++j) {
        const double d = distance(eq.domain[i], eq.domain[j]);
        const double e = distance(eq.codomain[eq.forward[i]], eq.codomain[eq.forward[j]]);
        fwd = std::max(fwd, e / d);
        bwd = std::max(bwd, d / e);
      }
    }
    CHECK(eq.distortion() == doctest::Approx(fwd * bwd));
    CHECK(eq.distortion() <= (2 * p.b / p.a + 1) * (4 * p.b / p.a + 1));
  }
}

TEST_CASE("transport along the identity keeps the family") {
  auto base = std::make_shared<const SpiderwebBase>(build_spiderweb_base(1, NormKind::LInf, 1.0, 2, 0.25));
  const OrderedNet net(Spiderweb{base, {}, NetParams{1.0, 2.0}, 4});
  const auto family = net.family();
  std::vector<Vector> pts;
  for (std::size_t i = 0; i < net.size(); ++i) pts.push_back(net.point(i));
  LipschitzEquivalence id{pts, pts, {}, 0.0, 0.0};
  for (std::size_t i = 0; i < pts.size(); ++i) id.forward.push_back(i);
  id.measure();
  CHECK(id.distortion() == 1.0);
  const auto moved = transport_basis(id, family);
  const auto before = family_lipschitz(family);
  const auto after = check_retractional_axioms(moved);
  CHECK(after.pass());
  CHECK(after.lipschitz.max == before.max);
}
