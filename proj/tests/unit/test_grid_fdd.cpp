// SPDX-License-Identifier: Apache-2.0
#include <memory>
#include <vector>

#include "doctest.h"
#include "lipnet/grid_fdd.hpp"

using namespace lipnet;

namespace {

std::shared_ptr<const GridSpace> two_blocks(int cap) {
  return std::make_shared<const GridSpace>(
      build_grid_space({{2, NormKind::LInf}, {2, NormKind::LInf}}, AmbientNorm::SupSum, 1.0, cap, 0.25));
}

GridPoint norms(int a, int b) { return GridPoint{{BasePoint{a, 0}, BasePoint{b, 0}}}; }

/// Smallest s whose diamond holds x, found by scanning s with rational radii.
Integer min_membership(const GridSpace& space, const GridPoint& x) {
  for (Integer s = 0;; ++s) {
    Rational total = 0;
    bool inside = true;
    for (std::size_t i = 0; i < space.block_count(); ++i) {
      if (x.norm(i) == 0) continue;
      if (s == 0) {
        inside = false;
        break;
      }
      total += Rational(x.norm(i)) / space.q().r(static_cast<int>(i) + 1, s);
    }
    if (inside && total <= 1) return s;
  }
}

}  // namespace

TEST_CASE("q sequence") {
  const QSeq q(4);
  CHECK(q[1] == 1);
  CHECK(q[2] == 8);
  CHECK(q[3] == 256);
  CHECK(q[4] == 24576);
  Integer expected = 1;
  const QSeq long_q(12);
  for (int k = 1; k < 12; ++k) {
    CHECK(long_q[k] == expected);
    expected *= Integer(k) << (k + 2);
  }
}

TEST_CASE("s(x) and diamond membership") {
  const auto space = two_blocks(4);
  CHECK(s_of(*space, norms(0, 0)) == 0);
  CHECK(s_of(*space, norms(3, 0)) == 3);
  CHECK(s_of(*space, norms(1, 2)) == 17);
  CHECK(in_diamond(*space, norms(0, 0), 0));
  CHECK_FALSE(in_diamond(*space, norms(1, 2), 16));
  CHECK(in_diamond(*space, norms(1, 2), 17));
  for (const auto& x : space->enumerate()) {
    const auto s = s_of(*space, x);
    CHECK(s == min_membership(*space, x));
    CHECK(in_diamond(*space, x, s));
    if (s > 0) CHECK_FALSE(in_diamond(*space, x, s - 1));
  }
}

TEST_CASE("local step and the s_k sequence") {
  const auto space = two_blocks(4);
  CHECK(local_phi(*space, norms(1, 0)) == norms(0, 0));
  const auto y = local_phi(*space, norms(1, 2));
  CHECK(y.norm(0) == 1);
  CHECK(y.norm(1) == 1);
  CHECK(s_of(*space, y) == 9);
  CHECK(sk_sequence(*space, norms(0, 0)) == std::vector<Integer>{0});
  CHECK(sk_sequence(*space, norms(1, 2)) == std::vector<Integer>{17, 9, 1, 0});
  CHECK(sk_sequence(*space, norms(3, 0)) == std::vector<Integer>{3, 2, 1, 0});
}

TEST_CASE("phi_s on examples") {
  const auto space = two_blocks(4);
  const auto x = norms(1, 2);
  CHECK(phi_grid(*space, 17, x) == x);
  CHECK(phi_grid(*space, 40, x) == x);
  CHECK(phi_grid(*space, 12, x) == local_phi(*space, x));
  CHECK(phi_grid(*space, 0, x) == norms(0, 0));
  for (int s = 0; s <= 17; ++s) CHECK(phi_grid(*space, s, x) == phi_grid_naive(*space, s, x));
}

TEST_CASE("closed form indices") {
  const auto space = two_blocks(4);
  const auto x = norms(1, 2);
  CHECK(ij_of(1, x) == std::pair{0, 1});
  CHECK(ij_of(2, x) == std::pair{0, 2});
  CHECK(ij_of(3, x) == std::pair{1, 1});
  CHECK(phi_closed_form(*space, 3, x) == norms(0, 0));
  CHECK(phi_closed_form(*space, 1, x) == local_phi(*space, x));
  CHECK(phi_closed_form(*space, 2, x) == GridPoint{{BasePoint{1, 0}, BasePoint{0, 0}}});
  // (i, j) from scanning the defining equation.
  for (const auto& p : space->enumerate()) {
    const int n = p.n();
    if (n == 0) continue;
    for (int k = 1; k <= p.total_norm(); ++k) {
      int acc = 0;
      for (int i = 0; i < n; ++i) {
        const int block = p.norm(static_cast<std::size_t>(n - 1 - i));
        if (k > acc && k <= acc + block) {
          CHECK(ij_of(k, p) == std::pair{i, k - acc});
          break;
        }
        acc += block;
      }
    }
  }
}

TEST_CASE("F^s examples") {
  const auto one = std::make_shared<const GridSpace>(
      build_grid_space({{2, NormKind::LInf}}, AmbientNorm::SupSum, 1.0, 4, 0.25));
  const GridPoint x{{BasePoint{3, 0}}};
  const auto v = one->vector(x);
  const auto f1 = F_s(*one, 1, x);
  CHECK(approx_equal(f1.blocks[0], v.blocks[0] * (1.0 / 3.0)));
  CHECK(f1.norms[0] == 1);
  const auto f0 = F_s(*one, 0, x);
  CHECK(f0.blocks[0].is_zero());
  const auto f5 = F_s(*one, 5, x);
  CHECK(f5.blocks[0] == v.blocks[0]);
}

TEST_CASE("grid net tables and identities") {
  const GridNet net(two_blocks(2));
  CHECK(net.size() == 625);
  for (std::size_t pos = 0; pos < net.size(); ++pos) {
    CHECK(net.position_of(net.point(pos)) == pos);
    CHECK(Integer(net.s_of(pos)) == s_of(net.space(), net.point(pos)));
    if (pos > 0) CHECK(net.s_of(pos - 1) <= net.s_of(pos));
  }
  for (const auto& id : check_grid_identities(net)) {
    CAPTURE(id.name);
    CHECK(id.pass);
    CHECK(id.checked > 0);
  }
}

TEST_CASE("grid proximity and F^s constants") {
  const GridNet net(two_blocks(2));
  const auto prox = grid_proximity(net);
  CHECK(prox.sk_gap.pass);
  CHECK(prox.s_gap.pass);
  CHECK(prox.unit_step.measured <= 1.0 + 1e-9);
  CHECK(prox.semigroup_deviation <= 1e-12);
  CHECK(prox.lambda_min >= 0.0);
  CHECK(prox.lambda_max <= 1.0 + 1e-9);
  const auto f = measure_F_lipschitz(net);
  CHECK(f.per_s.size() == net.s_max() + 1);
  CHECK(f.sup >= 1.0);
  const auto family = net.family(f.sup);
  CHECK(family.theoretical_bound() == doctest::Approx(grid_family_bound(net.space().params(), f.sup)));
  CHECK(grid_family_bound(NetParams{1.0, 2.0}, 1.0) == 29.0);
}
