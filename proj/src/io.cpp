// SPDX-License-Identifier: Apache-2.0
#include "lipnet/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

namespace lipnet {

namespace {

using Fields = std::map<std::string, std::string>;

std::vector<std::string> tokens_of(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  for (std::string t; in >> t;) out.push_back(t);
  return out;
}

bool blank(const std::string& line) {
  return std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c) != 0; });
}

// Next non-blank line; false at end of input.
bool next_line(std::istream& in, std::string& line, std::size_t& lineno) {
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!blank(line)) return true;
  }
  return false;
}

[[noreturn]] void fail(std::size_t lineno, const std::string& what) {
  throw ParseError("line " + std::to_string(lineno) + ": " + what);
}

Fields parse_header(const std::string& line, std::size_t lineno, const std::set<std::string>& allowed) {
  Fields f;
  for (const auto& t : tokens_of(line)) {
    const auto eq = t.find('=');
    if (eq == std::string::npos || eq == 0) fail(lineno, "expected key=value, got '" + t + "'");
    const auto key = t.substr(0, eq);
    if (!allowed.contains(key)) fail(lineno, "unknown header key '" + key + "'");
    if (!f.emplace(key, t.substr(eq + 1)).second) fail(lineno, "repeated header key '" + key + "'");
  }
  return f;
}

const std::string& require(const Fields& f, const std::string& key, std::size_t lineno) {
  const auto it = f.find(key);
  if (it == f.end()) fail(lineno, "missing header key '" + key + "'");
  return it->second;
}

double parse_double(const std::string& t, std::size_t lineno) {
  double v = 0.0;
  const auto* end = t.data() + t.size();
  const auto r = std::from_chars(t.data(), end, v);
  if (r.ec != std::errc() || r.ptr != end || !std::isfinite(v)) fail(lineno, "bad number '" + t + "'");
  return v;
}

long long parse_int(const std::string& t, std::size_t lineno) {
  long long v = 0;
  const auto* end = t.data() + t.size();
  const auto r = std::from_chars(t.data(), end, v);
  if (r.ec != std::errc() || r.ptr != end) fail(lineno, "bad integer '" + t + "'");
  return v;
}

std::size_t parse_dim(const std::string& t, std::size_t lineno) {
  const auto d = parse_int(t, lineno);
  if (d < 1 || d > 64) fail(lineno, "dimension must lie in 1..64");
  return static_cast<std::size_t>(d);
}

NormKind parse_norm(const std::string& t, std::size_t lineno) {
  try {
    return parse_norm_kind(t);
  } catch (const PreconditionError& e) {
    fail(lineno, e.what());
  }
}

NetParams parse_params(const Fields& f, const std::string& a_key, const std::string& b_key, std::size_t lineno) {
  NetParams p{parse_double(require(f, a_key, lineno), lineno), parse_double(require(f, b_key, lineno), lineno)};
  try {
    p.validate();
  } catch (const PreconditionError& e) {
    fail(lineno, e.what());
  }
  return p;
}

std::vector<std::string> split_commas(const std::string& t) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : t) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

Vector parse_point(const std::vector<std::string>& toks, std::size_t from, std::size_t dim, NormKind kind,
                   std::size_t lineno) {
  if (toks.size() != from + dim) {
    fail(lineno, "expected " + std::to_string(dim) + " coordinates, got " + std::to_string(toks.size() - from));
  }
  std::vector<double> c;
  for (std::size_t i = from; i < toks.size(); ++i) c.push_back(parse_double(toks[i], lineno));
  return Vector(std::move(c), kind);
}

void write_coords(std::ostream& out, const Vector& v) {
  for (std::size_t i = 0; i < v.dim(); ++i) out << (i ? " " : "") << format_double(v[i]);
}

std::string first_header(std::istream& in, std::size_t& lineno) {
  std::string line;
  if (!next_line(in, line, lineno)) throw ParseError("empty input");
  return line;
}

bool same_coords(const Vector& x, const Vector& y) { return approx_equal(x, y, 1e-12); }

}  // namespace

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

FileKind detect_file_kind(std::istream& in) {
  std::size_t lineno = 0;
  const auto header = first_header(in, lineno);
  const auto toks = tokens_of(header);
  bool blocks = false;
  bool radius = false;
  bool dim = false;
  for (const auto& t : toks) {
    blocks = blocks || t.starts_with("blocks=");
    radius = radius || t.starts_with("radius=");
    dim = dim || t.starts_with("dim=");
  }
  if (blocks) return FileKind::Grid;
  if (dim && radius) return FileKind::Spiderweb;
  if (dim) return FileKind::Net;
  fail(lineno, "unrecognized header");
}

void write_net(std::ostream& out, const NetFile& net) {
  out << "dim=" << net.dim << " norm=" << to_string(net.norm) << " a=" << format_double(net.params.a)
      << " b=" << format_double(net.params.b) << "\n";
  for (const auto& p : net.points) {
    if (p.dim() != net.dim || p.kind() != net.norm) throw DimensionMismatch("net point shape");
    write_coords(out, p);
    out << "\n";
  }
}

NetFile read_net(std::istream& in) {
  std::size_t lineno = 0;
  const auto header = first_header(in, lineno);
  const auto f = parse_header(header, lineno, {"dim", "norm", "a", "b"});
  NetFile net;
  net.dim = parse_dim(require(f, "dim", lineno), lineno);
  net.norm = parse_norm(require(f, "norm", lineno), lineno);
  net.params = parse_params(f, "a", "b", lineno);
  for (std::string line; next_line(in, line, lineno);) {
    net.points.push_back(parse_point(tokens_of(line), 0, net.dim, net.norm, lineno));
  }
  return net;
}

void write_spiderweb(std::ostream& out, const Spiderweb& web, BranchRule rule) {
  if (!web.base) throw PreconditionError("spiderweb without a base");
  const auto& base = *web.base;
  out << "dim=" << base.dim() << " norm=" << to_string(base.kind()) << " a=" << format_double(web.params.a)
      << " b=" << format_double(web.params.b) << " radius=" << web.radius
      << " base_a=" << format_double(base.params().a) << " base_b=" << format_double(base.params().b)
      << " mesh=" << format_double(base.mesh()) << " covering=" << format_double(base.covering_radius());
  if (rule == BranchRule::Flipped) out << " rule=flipped";
  out << "\n";
  for (int k = 0; k <= base.max_level(); ++k) {
    for (const auto& p : base.dyadic_layer(k)) {
      out << "layer=" << (1 << k) << " ";
      write_coords(out, p);
      out << "\n";
    }
  }
  for (const auto& x : web.extra_points) {
    out << "extra ";
    write_coords(out, x);
    out << "\n";
  }
}

SpiderwebFile read_spiderweb(std::istream& in) {
  std::size_t lineno = 0;
  const auto header = first_header(in, lineno);
  const auto f = parse_header(header, lineno,
                              {"dim", "norm", "a", "b", "radius", "base_a", "base_b", "mesh", "covering", "rule"});
  const auto header_line = lineno;
  const auto dim = parse_dim(require(f, "dim", lineno), lineno);
  const auto kind = parse_norm(require(f, "norm", lineno), lineno);
  SpiderwebFile out;
  out.web.params = parse_params(f, "a", "b", lineno);
  const auto radius = parse_int(require(f, "radius", lineno), lineno);
  if (radius < 0 || radius > (1 << 21)) fail(lineno, "radius out of range");
  out.web.radius = static_cast<int>(radius);
  NetParams base_params = out.web.params;
  if (f.contains("base_a") || f.contains("base_b")) base_params = parse_params(f, "base_a", "base_b", lineno);
  const double mesh = f.contains("mesh") ? parse_double(f.at("mesh"), lineno) : 0.0;
  const double covering = f.contains("covering") ? parse_double(f.at("covering"), lineno) : 0.0;
  if (f.contains("rule")) {
    const auto& r = f.at("rule");
    if (r == "flipped") {
      out.rule = BranchRule::Flipped;
    } else if (r != "standard") {
      fail(lineno, "unknown rule '" + r + "'");
    }
  }

  std::map<long long, std::vector<Vector>> layers;
  for (std::string line; next_line(in, line, lineno);) {
    const auto toks = tokens_of(line);
    if (toks[0] == "extra") {
      out.web.extra_points.push_back(parse_point(toks, 1, dim, kind, lineno));
    } else if (toks[0].starts_with("layer=")) {
      const auto m = parse_int(toks[0].substr(6), lineno);
      if (m < 1 || m > (1 << 20) || !is_power_of_two(static_cast<int>(m))) fail(lineno, "layer must be a power of two");
      layers[m].push_back(parse_point(toks, 1, dim, kind, lineno));
    } else {
      fail(lineno, "expected 'layer=<2^n>' or 'extra'");
    }
  }
  std::vector<std::vector<Vector>> dyadic;
  for (const auto& [m, pts] : layers) {
    if (m != (1LL << dyadic.size())) fail(header_line, "dyadic layers must be 1, 2, 4, ... without gaps");
    dyadic.push_back(pts);
  }
  if (dyadic.empty()) fail(header_line, "spiderweb file has no base layers");
  try {
    out.web.base = std::make_shared<const SpiderwebBase>(dim, kind, base_params, std::move(dyadic), mesh, covering);
  } catch (const Error& e) {
    throw ParseError(std::string("inconsistent spiderweb base: ") + e.what());
  }
  if (out.web.radius > out.web.base->max_layer()) fail(header_line, "radius exceeds the stored base layers");
  return out;
}

void write_grid(std::ostream& out, const GridSpace& space, const std::vector<GridPoint>& points) {
  const auto params = space.params();
  out << "blocks=" << space.block_count() << " dims=";
  for (std::size_t i = 0; i < space.block_count(); ++i) out << (i ? "," : "") << space.base(i).dim();
  out << " norms=";
  for (std::size_t i = 0; i < space.block_count(); ++i) out << (i ? "," : "") << to_string(space.base(i).kind());
  out << " ambient=" << to_string(space.ambient()) << " a=" << format_double(params.a)
      << " b=" << format_double(params.b) << " cap=" << space.norm_cap() << "\n";
  for (const auto& g : points) {
    const auto v = space.vector(g);
    for (std::size_t i = 0; i < g.blocks.size(); ++i) out << (i ? " " : "") << g.blocks[i].radius;
    for (const auto& b : v.blocks) {
      out << " ";
      write_coords(out, b);
    }
    out << "\n";
  }
}

GridFile read_grid(std::istream& in) {
  std::size_t lineno = 0;
  const auto header = first_header(in, lineno);
  const auto header_line = lineno;
  const auto f = parse_header(header, lineno, {"blocks", "dims", "norms", "ambient", "a", "b", "cap"});
  const auto k = parse_int(require(f, "blocks", lineno), lineno);
  if (k < 1 || k > 8) fail(lineno, "block count must lie in 1..8");
  const auto dim_toks = split_commas(require(f, "dims", lineno));
  const auto norm_toks = split_commas(require(f, "norms", lineno));
  if (dim_toks.size() != static_cast<std::size_t>(k) || norm_toks.size() != static_cast<std::size_t>(k)) {
    fail(lineno, "dims and norms need one entry per block");
  }
  std::vector<BlockSpec> specs;
  for (long long i = 0; i < k; ++i) {
    specs.push_back({parse_dim(dim_toks[static_cast<std::size_t>(i)], lineno),
                     parse_norm(norm_toks[static_cast<std::size_t>(i)], lineno)});
  }
  AmbientNorm ambient{};
  try {
    ambient = parse_ambient(require(f, "ambient", lineno));
  } catch (const PreconditionError& e) {
    fail(lineno, e.what());
  }
  const auto params = parse_params(f, "a", "b", lineno);

  struct Row {
    std::vector<int> norms;
    std::vector<Vector> blocks;
    std::size_t line;
  };
  std::vector<Row> rows;
  int max_norm = 0;
  for (std::string line; next_line(in, line, lineno);) {
    const auto toks = tokens_of(line);
    std::size_t expected = specs.size();
    for (const auto& s : specs) expected += s.dim;
    if (toks.size() != expected) fail(lineno, "expected " + std::to_string(expected) + " fields");
    Row row{{}, {}, lineno};
    std::size_t at = specs.size();
    for (std::size_t i = 0; i < specs.size(); ++i) {
      const auto n = parse_int(toks[i], lineno);
      if (n < 0 || n > (1 << 20)) fail(lineno, "block norm out of range");
      row.norms.push_back(static_cast<int>(n));
      max_norm = std::max(max_norm, static_cast<int>(n));
      std::vector<double> c;
      for (std::size_t d = 0; d < specs[i].dim; ++d) c.push_back(parse_double(toks[at + d], lineno));
      at += specs[i].dim;
      row.blocks.emplace_back(std::move(c), specs[i].kind);
      if (std::abs(row.blocks.back().norm() - static_cast<double>(n)) > kTolerance * std::max(1.0, double(n))) {
        fail(lineno, "block " + std::to_string(i + 1) + " coordinates do not have norm " + std::to_string(n));
      }
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) fail(header_line, "grid file has no points");
  int cap = max_norm;
  if (f.contains("cap")) {
    const auto c = parse_int(f.at("cap"), header_line);
    if (c < max_norm || c > (1 << 20)) fail(header_line, "cap below the largest block norm");
    cap = static_cast<int>(c);
  }
  const int levels = floor_log2(std::max(cap, 1));

  std::vector<std::shared_ptr<const SpiderwebBase>> bases;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    std::vector<std::vector<Vector>> dyadic;
    for (int lev = 0; lev <= levels; ++lev) {
      const int r = 1 << lev;
      std::set<std::vector<double>> seen;
      for (const auto& row : rows) {
        if (row.norms[i] == r) {
          const auto c = row.blocks[i].coords();
          seen.emplace(c.begin(), c.end());
        }
      }
      std::vector<Vector> layer;
      if (lev > 0) {
        for (const auto& p : dyadic.back()) {
          const Vector doubled = p * 2.0;
          auto it = std::find_if(seen.begin(), seen.end(), [&](const std::vector<double>& c) {
            return same_coords(Vector(c, specs[i].kind), doubled);
          });
          if (it == seen.end()) {
            fail(header_line, "block " + std::to_string(i + 1) + " layer " + std::to_string(r) +
                                  " does not contain the doubled previous layer");
          }
          layer.emplace_back(*it, specs[i].kind);
          seen.erase(it);
        }
      }
      for (const auto& c : seen) layer.emplace_back(c, specs[i].kind);
      if (layer.empty()) fail(header_line, "block " + std::to_string(i + 1) + " has no points of norm " + std::to_string(r));
      dyadic.push_back(std::move(layer));
    }
    try {
      bases.push_back(std::make_shared<const SpiderwebBase>(specs[i].dim, specs[i].kind, params, std::move(dyadic)));
    } catch (const Error& e) {
      throw ParseError("block " + std::to_string(i + 1) + ": " + e.what());
    }
  }
  GridFile out;
  out.space = std::make_shared<const GridSpace>(bases, ambient, cap);
  for (const auto& row : rows) {
    GridPoint g;
    for (std::size_t i = 0; i < specs.size(); ++i) {
      const int r = row.norms[i];
      if (r == 0) {
        g.blocks.push_back({0, 0});
        continue;
      }
      const auto& base = *bases[i];
      const auto& layer = base.dyadic_layer(floor_log2(r));
      std::size_t j = 0;
      while (j < layer.size() && !same_coords(base.point({r, j}), row.blocks[i])) ++j;
      if (j == layer.size()) fail(row.line, "block " + std::to_string(i + 1) + " is not a base point");
      g.blocks.push_back({r, j});
    }
    out.points.push_back(std::move(g));
  }
  return out;
}

}  // namespace lipnet
