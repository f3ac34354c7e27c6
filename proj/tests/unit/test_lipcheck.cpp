// SPDX-License-Identifier: Apache-2.0
#include <memory>
#include <random>
#include <vector>

#include "doctest.h"
#include "lipnet/lipcheck.hpp"
#include "lipnet/retract_fd.hpp"

using namespace lipnet;

namespace {

std::vector<Vector> sample_points() {
  std::vector<Vector> pts;
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int i = 0; i < 40; ++i) pts.push_back(Vector({u(rng), u(rng)}, NormKind::L2));
  return pts;
}

OrderedNet plane_net(int radius) {
  auto base = std::make_shared<const SpiderwebBase>(build_spiderweb_base(2, NormKind::LInf, 1.0, 2, 0.25));
  return OrderedNet(Spiderweb{base, {}, NetParams{1.0, 2.0}, radius});
}

/// Unpruned per-index constants straight from the definition.
std::vector<double> brute_per_index(const RetractionFamily& f) {
  std::vector<double> out(f.size(), 0.0);
  const auto& p = f.points();
  for (std::size_t idx = 0; idx < f.size(); ++idx) {
    for (std::size_t i = 0; i < f.size(); ++i) {
      for (std::size_t j = i + 1; j < f.size(); ++j) {
        out[idx] = std::max(out[idx], p.distance(f.eval(idx, i), f.eval(idx, j)) / p.distance(i, j));
      }
    }
  }
  return out;
}

}  // namespace

TEST_CASE("Lipschitz norm of simple maps") {
  const auto pts = sample_points();
  CHECK(lipschitz_norm(pts, [](const Vector& x) { return x; }).value == doctest::Approx(1.0));
  CHECK(lipschitz_norm(pts, [](const Vector& x) { return Vector::zero(x.dim(), x.kind()); }).value == 0.0);
  CHECK(lipschitz_norm(pts, [](const Vector& x) { return x * 2.0; }).value == doctest::Approx(2.0));
  const auto sampled = lipschitz_norm(pts, [](const Vector& x) { return x * 2.0; },
                                      LipOptions{LipMode::Sampled, 200, 3});
  CHECK(sampled.value == doctest::Approx(2.0));
}

TEST_CASE("pruned family constants match an exhaustive sweep") {
  const auto net = plane_net(3);
  const auto family = net.family();
  const auto brute = brute_per_index(family);
  const auto fast = family_lipschitz(family, CertOptions{0});
  double max = 0.0;
  for (double v : brute) max = std::max(max, v);
  CHECK(fast.max == doctest::Approx(max));
  for (std::size_t l = 0; l < family.level_count(); ++l) {
    double level = 0.0;
    for (std::size_t i = family.level_begin(l); i < family.level_end(l); ++i) level = std::max(level, brute[i]);
    CHECK(fast.per_level[l] == doctest::Approx(level));
  }
  const auto full = family_lipschitz(family);
  REQUIRE(full.per_index.size() == brute.size());
  for (std::size_t i = 0; i < brute.size(); ++i) CHECK(full.per_index[i] == doctest::Approx(brute[i]));
}

TEST_CASE("axioms on the 1-D spiderweb and a flipped mutant") {
  auto base = std::make_shared<const SpiderwebBase>(build_spiderweb_base(1, NormKind::LInf, 1.0, 2, 0.25));
  const OrderedNet net(Spiderweb{base, {}, NetParams{1.0, 2.0}, 4});
  const auto good = check_retractional_axioms(net.family());
  CHECK(good.pass());
  CHECK(good.lipschitz.max <= 26.0);

  const auto bad = check_retractional_axioms(net.family(BranchRule::Flipped));
  CHECK_FALSE(bad.pass());
  bool witnessed = false;
  for (const auto& a : bad.axioms) witnessed = witnessed || (!a.pass && a.witness.has_value());
  CHECK(witnessed);
}

TEST_CASE("trajectory commutation agrees with literal evaluation") {
  const auto net = plane_net(3);
  for (auto rule : {BranchRule::Standard, BranchRule::Flipped}) {
    const auto f = net.family(rule);
    CHECK(check_commutation(f).pass == check_commutation_naive(f).pass);
    CHECK(check_commutation_naive(f, 50, 9).pass == check_commutation(f).pass);
  }
}

TEST_CASE("single point family passes vacuously") {
  auto base = std::make_shared<const SpiderwebBase>(build_spiderweb_base(1, NormKind::LInf, 1.0, 0, 0.25));
  const OrderedNet net(Spiderweb{base, {}, NetParams{1.0, 2.0}, 0});
  REQUIRE(net.size() == 1);
  CHECK(check_retractional_axioms(net.family()).pass());
}

TEST_CASE("check_bound") {
  const auto zero = check_bound("same", 10, [](std::size_t, long long&) { return 0.0; }, 1.0);
  CHECK(zero.measured == 0.0);
  CHECK(zero.pass);
  const auto over = check_bound("over", 10, [](std::size_t i, long long& p) {
    p = static_cast<long long>(i) * 2;
    return static_cast<double>(i);
  }, 5.0);
  CHECK_FALSE(over.pass);
  CHECK(over.measured == 9.0);
  CHECK(over.point == 9);
  CHECK(over.parameter == 18);
}

TEST_CASE("griddability of two l-infinity blocks") {
  std::vector<Vector> block;
  for (int i = -4; i <= 4; ++i) {
    for (int j = -4; j <= 4; ++j) block.push_back(Vector({1.0 * i, 1.0 * j}, NormKind::LInf));
  }
  const std::vector<BlockSpec> specs{{2, NormKind::LInf}, {2, NormKind::LInf}};
  const NetParams p{1.0, 2.0};
  const auto sup = check_griddability(BlockSpace(specs, AmbientNorm::SupSum), {block, block}, {p, p}, 3.0, 2000, 4);
  CHECK(sup.pass());
  CHECK(sup.min_pairwise_distance == 1.0);
  CHECK(sup.max_sample_distance <= 0.5);
  const auto l1 = check_griddability(BlockSpace(specs, AmbientNorm::L1Sum), {block, block}, {p, p}, 3.0, 2000, 4);
  CHECK(l1.max_sample_distance > sup.max_sample_distance);
  const auto one = check_griddability(BlockSpace({specs[0]}, AmbientNorm::SupSum), {block}, {p}, 3.0, 500, 4);
  CHECK(one.pass());
}
