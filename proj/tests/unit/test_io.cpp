// SPDX-License-Identifier: Apache-2.0
#include <memory>
#include <sstream>
#include <string>

#include "doctest.h"
#include "lipnet/io.hpp"
#include "lipnet/retract_fd.hpp"

using namespace lipnet;

TEST_CASE("doubles round trip through text") {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 1e300, 0.0}) CHECK(std::stod(format_double(v)) == v);
}

TEST_CASE("net files") {
  const NetFile net{2, NormKind::LInf, NetParams{1.0, 2.0}, random_net(2, NormKind::LInf, 1.0, 3.0, 4)};
  std::ostringstream out;
  write_net(out, net);
  std::istringstream in(out.str());
  CHECK(detect_file_kind(in) == FileKind::Net);
  in.seekg(0);
  const auto back = read_net(in);
  CHECK(back.points == net.points);
  std::ostringstream again;
  write_net(again, back);
  CHECK(again.str() == out.str());
}

TEST_CASE("spiderweb files") {
  auto base = std::make_shared<const SpiderwebBase>(build_spiderweb_base(2, NormKind::L2, 1.0, 2, 0.25));
  const Spiderweb web{base, {}, NetParams{1.0, 2.0}, 5};
  std::ostringstream out;
  write_spiderweb(out, web, BranchRule::Flipped);
  std::istringstream in(out.str());
  CHECK(detect_file_kind(in) == FileKind::Spiderweb);
  in.seekg(0);
  const auto back = read_spiderweb(in);
  CHECK(back.rule == BranchRule::Flipped);
  CHECK(back.web.all_points() == web.all_points());
  std::ostringstream again;
  write_spiderweb(again, back.web, back.rule);
  CHECK(again.str() == out.str());
}

TEST_CASE("grid files") {
  const auto space = build_grid_space({{2, NormKind::LInf}, {1, NormKind::L2}}, AmbientNorm::L1Sum, 1.0, 2, 0.25);
  const auto points = space.enumerate();
  std::ostringstream out;
  write_grid(out, space, points);
  std::istringstream in(out.str());
  CHECK(detect_file_kind(in) == FileKind::Grid);
  in.seekg(0);
  const auto back = read_grid(in);
  CHECK(back.points.size() == points.size());
  CHECK(back.space->ambient() == AmbientNorm::L1Sum);
  for (std::size_t i = 0; i < points.size(); ++i) {
    CHECK(back.space->flat(back.points[i]) == space.flat(points[i]));
  }
  std::ostringstream again;
  write_grid(again, *back.space, back.points);
  CHECK(again.str() == out.str());
}

TEST_CASE("malformed files") {
  std::istringstream empty("");
  CHECK_THROWS_AS(detect_file_kind(empty), ParseError);
  std::istringstream unknown("hello world\n");
  CHECK_THROWS_AS(detect_file_kind(unknown), ParseError);
  std::istringstream bad_point("dim=2 norm=L2 a=1 b=2\n1.0\n");
  CHECK_THROWS_AS(read_net(bad_point), ParseError);
  std::istringstream bad_number("dim=1 norm=L2 a=1 b=2\n1.0x\n");
  CHECK_THROWS_AS(read_net(bad_number), ParseError);
  std::istringstream bad_key("dim=1 norm=L2 a=1 b=2 c=3\n");
  CHECK_THROWS_AS(read_net(bad_key), ParseError);
}
