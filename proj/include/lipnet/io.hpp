// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "lipnet/family.hpp"
#include "lipnet/grid_fdd.hpp"
#include "lipnet/nets.hpp"

namespace lipnet {

/// Malformed or inconsistent input file.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Shortest decimal text that round-trips (17 significant digits).
std::string format_double(double value);

enum class FileKind { Net, Spiderweb, Grid };

/// Kind of a file from its header line. Throws ParseError on an empty or unknown header.
FileKind detect_file_kind(std::istream& in);

struct NetFile {
  std::size_t dim = 1;
  NormKind norm = NormKind::L2;
  NetParams params;
  std::vector<Vector> points;
};

/// Header `dim=<d> norm=<L1|L2|LINF> a=<a> b=<b>`, then one point per line.
void write_net(std::ostream& out, const NetFile& net);
NetFile read_net(std::istream& in);

struct SpiderwebFile {
  Spiderweb web;
  BranchRule rule = BranchRule::Standard;
};

/// Net header plus `radius=<R>` and optional `mesh=`, `covering=`, `base_a=`, `base_b=` and
/// `rule=flipped`; then `layer=<2^n>` lines for every dyadic base layer and `extra` lines.
void write_spiderweb(std::ostream& out, const Spiderweb& web, BranchRule rule = BranchRule::Standard);
SpiderwebFile read_spiderweb(std::istream& in);

struct GridFile {
  std::shared_ptr<const GridSpace> space;
  std::vector<GridPoint> points;
};

/// Header `blocks=<k> dims=<d1,...> norms=<...> ambient=<SUP|L1> a=<a> b=<b> cap=<c>`, then
/// per point the integer block norms followed by the block coordinates.
void write_grid(std::ostream& out, const GridSpace& space, const std::vector<GridPoint>& points);
/// Rebuilds each block's dyadic layers from the points of dyadic norm (the doubled previous
/// layer first, then the rest in lexicographic order) and resolves every point to base points.
GridFile read_grid(std::istream& in);

}  // namespace lipnet
