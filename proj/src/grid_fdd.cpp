// SPDX-License-Identifier: Apache-2.0
#include "lipnet/grid_fdd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "lipnet/lipcheck.hpp"
#include "lipnet/parallel.hpp"
#include "lipnet/retract_fd.hpp"

namespace lipnet {

namespace {

constexpr double kGridTableBudget = 2e8;

std::vector<BlockSpec> specs_of(const std::vector<std::shared_ptr<const SpiderwebBase>>& bases) {
  std::vector<BlockSpec> specs;
  for (const auto& b : bases) {
    if (!b) throw PreconditionError("grid block without a base");
    specs.push_back({b->dim(), b->kind()});
  }
  return specs;
}

}  // namespace

QSeq::QSeq(int k_max) {
  if (k_max < 1) throw PreconditionError("q sequence needs at least one block");
  q_.assign(static_cast<std::size_t>(k_max) + 1, Integer(0));
  q_[1] = 1;
  for (int k = 1; k < k_max; ++k) {
    q_[static_cast<std::size_t>(k) + 1] = q_[static_cast<std::size_t>(k)] * k * (Integer(1) << (k + 2));
  }
}

Rational QSeq::r(int k, const Integer& s) const {
  if (k < 1 || k > size()) throw PreconditionError("q index out of range");
  return Rational(s, (*this)[k]);
}

int GridPoint::n() const {
  for (std::size_t i = blocks.size(); i-- > 0;) {
    if (blocks[i].radius != 0) return static_cast<int>(i) + 1;
  }
  return 0;
}

int GridPoint::total_norm() const {
  int t = 0;
  for (const auto& b : blocks) t += b.radius;
  return t;
}

GridSpace::GridSpace(std::vector<std::shared_ptr<const SpiderwebBase>> bases, AmbientNorm ambient,
                     int norm_cap)
    : bases_(std::move(bases)),
      space_(specs_of(bases_), ambient),
      cap_(norm_cap),
      q_(static_cast<int>(std::max<std::size_t>(bases_.size(), 1))) {
  if (bases_.empty()) throw PreconditionError("grid needs at least one block");
  if (cap_ < 0) throw PreconditionError("grid norm cap must be nonnegative");
  for (const auto& b : bases_) {
    if (b->max_layer() < cap_) throw PreconditionError("block base does not reach the norm cap");
  }
}

NetParams GridSpace::params() const {
  NetParams p{std::numeric_limits<double>::infinity(), 0.0};
  for (const auto& b : bases_) {
    p.a = std::min(p.a, b->params().a);
    p.b = std::max(p.b, b->params().b);
  }
  return p;
}

void GridSpace::validate(const GridPoint& x) const {
  if (x.blocks.size() != block_count()) throw DimensionMismatch("grid point block count");
  for (std::size_t i = 0; i < x.blocks.size(); ++i) {
    const auto& p = x.blocks[i];
    if (p.radius < 0 || p.radius > cap_) throw PreconditionError("grid block norm outside the cap");
    const std::size_t count = p.radius == 0 ? 1 : base(i).dyadic_layer(floor_log2(p.radius)).size();
    if (p.index >= count) throw PreconditionError("grid block index out of range");
  }
}

BlockVector GridSpace::vector(const GridPoint& x) const {
  validate(x);
  BlockVector v;
  for (std::size_t i = 0; i < x.blocks.size(); ++i) {
    v.blocks.push_back(base(i).point(x.blocks[i]));
    v.norms.emplace_back(x.blocks[i].radius);
  }
  return v;
}

std::vector<double> GridSpace::flat(const GridPoint& x) const { return flat(vector(x)); }

std::vector<double> GridSpace::flat(const BlockVector& x) const {
  std::vector<double> out;
  for (const auto& b : x.blocks) out.insert(out.end(), b.coords().begin(), b.coords().end());
  return out;
}

double GridSpace::distance(const BlockVector& x, const BlockVector& y) const {
  return block_distance(x.blocks, y.blocks, space_);
}

std::vector<GridPoint> GridSpace::enumerate() const {
  std::vector<std::vector<BasePoint>> per_block;
  std::size_t total = 1;
  for (const auto& b : bases_) {
    per_block.push_back(b->points(cap_));
    total *= per_block.back().size();
    if (static_cast<double>(total) > kGridTableBudget) throw ResourceError("grid has too many points");
  }
  std::vector<GridPoint> out;
  out.reserve(total);
  std::vector<std::size_t> digit(per_block.size(), 0);
  for (std::size_t t = 0; t < total; ++t) {
    GridPoint g;
    for (std::size_t i = 0; i < per_block.size(); ++i) g.blocks.push_back(per_block[i][digit[i]]);
    out.push_back(std::move(g));
    for (std::size_t i = 0; i < digit.size(); ++i) {
      if (++digit[i] < per_block[i].size()) break;
      digit[i] = 0;
    }
  }
  return out;
}

GridSpace build_grid_space(const std::vector<BlockSpec>& blocks, AmbientNorm ambient, double a,
                           int norm_cap, double mesh, const BaseBuildOptions& options) {
  std::vector<std::shared_ptr<const SpiderwebBase>> bases;
  for (const auto& spec : blocks) {
    bases.push_back(std::make_shared<const SpiderwebBase>(
        build_spiderweb_base(spec.dim, spec.kind, a, floor_log2(std::max(norm_cap, 1)), mesh, options)));
  }
  return GridSpace(std::move(bases), ambient, norm_cap);
}

Integer s_of(const GridSpace& space, const GridPoint& x) {
  if (x.blocks.size() != space.block_count()) throw DimensionMismatch("grid point block count");
  Integer s = 0;
  for (std::size_t i = 0; i < x.blocks.size(); ++i) s += space.q()[static_cast<int>(i) + 1] * x.blocks[i].radius;
  return s;
}

bool in_diamond(const GridSpace& space, const GridPoint& x, const Integer& s) { return s_of(space, x) <= s; }

bool in_diamond(const GridSpace& space, const BlockVector& x, const Rational& s) {
  if (x.norms.size() != space.block_count()) throw DimensionMismatch("block vector block count");
  Rational sum = 0;
  for (std::size_t i = 0; i < x.norms.size(); ++i) sum += x.norms[i] * space.q()[static_cast<int>(i) + 1];
  return sum <= s;
}

GridPoint local_phi(const GridSpace& space, const GridPoint& x) {
  const int n = x.n();
  if (n == 0) throw PreconditionError("local step needs a nonzero grid point");
  GridPoint y = x;
  auto& last = y.blocks[static_cast<std::size_t>(n) - 1];
  last = Psi(space.base(static_cast<std::size_t>(n) - 1), last.radius - 1, last);
  return y;
}

std::vector<Integer> sk_sequence(const GridSpace& space, const GridPoint& x, const Integer& s_stop) {
  space.validate(x);
  GridPoint y = x;
  std::vector<Integer> seq{s_of(space, y)};
  while (seq.back() > s_stop && y.n() != 0) {
    seq.push_back(seq.back() - space.q()[y.n()]);
    y = local_phi(space, y);
  }
  return seq;
}

GridPoint phi_grid(const GridSpace& space, const Integer& s, const GridPoint& x) {
  if (s < 0) throw PreconditionError("phi_s needs s >= 0");
  space.validate(x);
  GridPoint y = x;
  Integer cur = s_of(space, y);
  while (cur > s) {
    cur -= space.q()[y.n()];
    y = local_phi(space, y);
  }
  return y;
}

GridPoint phi_grid_naive(const GridSpace& space, const Integer& s, const GridPoint& x) {
  if (s < 0) throw PreconditionError("phi_s needs s >= 0");
  space.validate(x);
  GridPoint y = x;
  // varphi_t is the identity on N_{t-1} and the local step on N_t minus N_{t-1}.
  for (Integer t = s_of(space, x); t > s; --t) {
    if (s_of(space, y) > t - 1) y = local_phi(space, y);
  }
  return y;
}

std::pair<int, int> ij_of(int k, const GridPoint& x) {
  const int n = x.n();
  if (k < 1 || k > x.total_norm()) throw PreconditionError("closed-form index out of range");
  int cum = 0;
  for (int i = 0; i < n; ++i) {
    const int norm = x.blocks[static_cast<std::size_t>(n - i - 1)].radius;
    if (k <= cum + norm) return {i, k - cum};
    cum += norm;
  }
  throw PreconditionError("closed-form index out of range");
}

GridPoint phi_closed_form(const GridSpace& space, int k, const GridPoint& x) {
  space.validate(x);
  const auto [i, j] = ij_of(k, x);
  const std::size_t block = static_cast<std::size_t>(x.n() - i - 1);
  GridPoint y = x;
  for (std::size_t t = block + 1; t < y.blocks.size(); ++t) y.blocks[t] = {0, 0};
  auto& b = y.blocks[block];
  b = Psi(space.base(block), b.radius - j, b);
  return y;
}

int m_of(const GridSpace& space, const BlockVector& x, const Integer& s) {
  if (s < 1) throw PreconditionError("m(x, s) needs s >= 1");
  if (x.norms.size() != space.block_count()) throw DimensionMismatch("block vector block count");
  int n = 0;
  for (std::size_t i = 0; i < x.norms.size(); ++i) {
    if (x.norms[i] != 0) n = static_cast<int>(i) + 1;
  }
  Rational partial = 0;
  int m = 1;
  for (int k = 1; k <= n; ++k) {
    partial += x.norms[static_cast<std::size_t>(k) - 1] * space.q()[k];
    if (partial > Rational(s)) break;
    m = k + 1;
  }
  return m;
}

BlockVector F_s(const GridSpace& space, const Integer& s, const BlockVector& x) {
  if (s < 0) throw PreconditionError("F^s needs s >= 0");
  BlockVector y = x;
  if (s == 0) {
    for (std::size_t i = 0; i < y.blocks.size(); ++i) {
      y.blocks[i] = Vector::zero(y.blocks[i].dim(), y.blocks[i].kind());
      y.norms[i] = 0;
    }
    return y;
  }
  const int m = m_of(space, x, s);
  int n = 0;
  for (std::size_t i = 0; i < x.norms.size(); ++i) {
    if (x.norms[i] != 0) n = static_cast<int>(i) + 1;
  }
  if (m == n + 1) return y;
  Rational before = 0;
  for (int i = 1; i < m; ++i) before += x.norms[static_cast<std::size_t>(i) - 1] * space.q()[i];
  const Rational f = (Rational(s) - before) / Rational(space.q()[m]);
  const auto mi = static_cast<std::size_t>(m) - 1;
  y.blocks[mi] = x.blocks[mi] * static_cast<double>(f / x.norms[mi]);
  y.norms[mi] = f;
  for (std::size_t i = mi + 1; i < y.blocks.size(); ++i) {
    y.blocks[i] = Vector::zero(y.blocks[i].dim(), y.blocks[i].kind());
    y.norms[i] = 0;
  }
  return y;
}

BlockVector F_s(const GridSpace& space, const Integer& s, const GridPoint& x) {
  return F_s(space, s, space.vector(x));
}

double grid_family_bound(const NetParams& params, double f_lipschitz) {
  return (12.0 * params.b + 4.0) / params.a + f_lipschitz;
}

GridNet::GridNet(std::shared_ptr<const GridSpace> space) : space_(std::move(space)) {
  if (!space_) throw PreconditionError("grid net needs a grid space");
  const auto& sp = *space_;
  auto grid = sp.enumerate();

  struct Entry {
    std::size_t s;
    std::vector<double> flat;
    GridPoint g;
  };
  std::vector<Entry> entries;
  entries.reserve(grid.size());
  Integer s_max = 0;
  for (auto& g : grid) {
    const Integer s = lipnet::s_of(sp, g);
    s_max = std::max(s_max, s);
    if (s > Integer(std::numeric_limits<std::uint32_t>::max())) throw ResourceError("grid level out of range");
    entries.push_back({static_cast<std::size_t>(s), sp.flat(g), std::move(g)});
  }
  const auto levels = static_cast<std::size_t>(s_max) + 1;
  if (static_cast<double>(levels) * static_cast<double>(entries.size()) > kGridTableBudget) {
    throw ResourceError("grid tables exceed the size budget");
  }
  std::sort(entries.begin(), entries.end(), [](const Entry& x, const Entry& y) {
    if (x.s != y.s) return x.s < y.s;
    return std::lexicographical_compare(x.flat.begin(), x.flat.end(), y.flat.begin(), y.flat.end());
  });

  const std::size_t n = entries.size();
  std::vector<double> flat;
  flat.reserve(n * (entries.empty() ? 0 : entries[0].flat.size()));
  offsets_.assign(levels + 1, n);
  for (std::size_t i = n; i-- > 0;) offsets_[entries[i].s] = i;
  for (std::size_t l = levels; l-- > 0;) offsets_[l] = std::min(offsets_[l], offsets_[l + 1]);
  for (std::size_t i = 0; i < n; ++i) {
    s_.push_back(entries[i].s);
    flat.insert(flat.end(), entries[i].flat.begin(), entries[i].flat.end());
    index_.emplace(entries[i].g, i);
    grid_.push_back(std::move(entries[i].g));
  }
  points_ = std::make_shared<const PointSet>(sp.metric(), std::move(flat));

  tables_.assign(levels, RetractionFamily::Table(n));
  parallel_chunks(n, thread_count(), [&](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      // phi_s(x) = y_k on [s_k, s_{k-1}) along the local chain, and x itself for s >= s(x).
      GridPoint y = grid_[i];
      std::size_t hi = levels;
      std::size_t cur = s_[i];
      std::size_t pos = i;
      while (true) {
        for (std::size_t s = cur; s < hi; ++s) tables_[s][i] = static_cast<std::uint32_t>(pos);
        if (cur == 0) break;
        hi = cur;
        cur -= static_cast<std::size_t>(sp.q()[y.n()]);
        y = local_phi(sp, y);
        pos = position_of(y);
      }
    }
  });
}

std::size_t GridNet::position_of(const GridPoint& x) const {
  const auto it = index_.find(x);
  if (it == index_.end()) throw PreconditionError("grid point outside the truncated grid");
  return it->second;
}

RetractionFamily GridNet::family(double f_lipschitz, BranchRule rule) const {
  return RetractionFamily(points_, offsets_, tables_, grid_family_bound(space_->params(), f_lipschitz), rule);
}

FLipschitz measure_F_lipschitz(const GridNet& net) {
  const auto& sp = net.space();
  FLipschitz out;
  out.per_s.assign(net.s_max() + 1, 0.0);
  if (net.size() < 2) return out;
  std::vector<BlockVector> base;
  base.reserve(net.size());
  for (const auto& g : net.grid_points()) base.push_back(sp.vector(g));
  for (std::size_t s = 1; s <= net.s_max(); ++s) {
    std::vector<double> flat;
    for (const auto& x : base) {
      const auto f = sp.flat(F_s(sp, Integer(s), x));
      flat.insert(flat.end(), f.begin(), f.end());
    }
    const PointSet images(sp.metric(), std::move(flat));
    out.per_s[s] = lipschitz_norm(net.points(), images).value;
  }
  out.sup = 0.0;
  out.min_positive = std::numeric_limits<double>::infinity();
  for (std::size_t s = 1; s < out.per_s.size(); ++s) {
    out.sup = std::max(out.sup, out.per_s[s]);
    out.min_positive = std::min(out.min_positive, out.per_s[s]);
  }
  if (out.per_s.size() < 2) out.min_positive = 0.0;
  out.spread = out.min_positive > 0.0 ? out.sup / out.min_positive : 0.0;
  return out;
}

namespace {

double max_coord_gap(const BlockVector& x, const BlockVector& y) {
  double worst = 0.0;
  for (std::size_t i = 0; i < x.blocks.size(); ++i) {
    for (std::size_t d = 0; d < x.blocks[i].dim(); ++d) {
      worst = std::max(worst, std::abs(x.blocks[i][d] - y.blocks[i][d]));
    }
  }
  return worst;
}

BlockVector difference(const BlockVector& x, const BlockVector& y) {
  BlockVector d;
  for (std::size_t i = 0; i < x.blocks.size(); ++i) {
    d.blocks.push_back(x.blocks[i] - y.blocks[i]);
    d.norms.emplace_back(0);
  }
  return d;
}

double ambient_norm(const GridSpace& space, const BlockVector& x) {
  return block_norms(x.blocks, space.space()).ambient;
}

}  // namespace

RadialStep radial_step_lambda(const GridSpace& space, const Integer& s, const Integer& t, const BlockVector& y) {
  if (t > s) throw PreconditionError("radial step needs t <= s");
  std::size_t n = y.norms.size();
  for (std::size_t i = 0; i < y.norms.size(); ++i) {
    if (y.norms[i] != 0) n = i;
  }
  if (n == y.norms.size()) throw PreconditionError("radial step needs a nonzero vector");
  BlockVector u = y;
  for (std::size_t i = 0; i < u.blocks.size(); ++i) {
    if (i != n) u.blocks[i] = Vector::zero(u.blocks[i].dim(), u.blocks[i].kind());
  }
  u.blocks[n] = y.blocks[n] * (1.0 / static_cast<double>(y.norms[n]));
  const BlockVector ft = F_s(space, t, y);
  const BlockVector d = difference(F_s(space, s, y), ft);
  // Project onto the largest coordinate of u, then measure what is left.
  std::size_t axis = 0;
  for (std::size_t k = 1; k < u.blocks[n].dim(); ++k) {
    if (std::abs(u.blocks[n][k]) > std::abs(u.blocks[n][axis])) axis = k;
  }
  RadialStep out;
  out.lambda = d.blocks[n][axis] / u.blocks[n][axis] + 0.0;
  BlockVector scaled = u;
  scaled.blocks[n] = u.blocks[n] * out.lambda;
  out.residual = ambient_norm(space, difference(d, scaled));
  out.hypothesis = ambient_norm(space, difference(difference(y, ft), u));
  return out;
}

GridProximity grid_proximity(const GridNet& net) {
  const auto& sp = net.space();
  const double b = sp.params().b;
  const std::size_t n = net.size();
  std::vector<BlockVector> vec(n);
  parallel_chunks(n, thread_count(), [&](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) vec[i] = sp.vector(net.point(i));
  });
  auto phi_vec = [&](std::size_t s, std::size_t i) -> const BlockVector& { return vec[net.phi(s, i)]; };

  GridProximity out;
  out.sk_gap = check_bound("phi-F-at-sk", n, [&](std::size_t i, long long& param) {
    double worst = 0.0;
    for (const auto& sk : sk_sequence(sp, net.point(i))) {
      const auto s = static_cast<std::size_t>(sk);
      const double g = sp.distance(phi_vec(s, i), F_s(sp, sk, vec[i]));
      if (g > worst) {
        worst = g;
        param = static_cast<long long>(s);
      }
    }
    return worst;
  }, 6.0 * b);
  out.s_gap = check_bound("phi-F", n, [&](std::size_t i, long long& param) {
    double worst = 0.0;
    for (std::size_t s = 0; s <= net.s_of(i); ++s) {
      const double g = sp.distance(phi_vec(s, i), F_s(sp, Integer(s), vec[i]));
      if (g > worst) {
        worst = g;
        param = static_cast<long long>(s);
      }
    }
    return worst;
  }, 1.0 + 6.0 * b);
  out.unit_step = check_bound("F-unit-step", n, [&](std::size_t i, long long& param) {
    double worst = 0.0;
    BlockVector prev = F_s(sp, Integer(0), vec[i]);
    for (std::size_t s = 0; s < net.s_of(i); ++s) {
      BlockVector next = F_s(sp, Integer(s + 1), vec[i]);
      const double g = sp.distance(next, prev);
      if (g > worst) {
        worst = g;
        param = static_cast<long long>(s);
      }
      prev = std::move(next);
    }
    return worst;
  }, 1.0);

  const std::size_t chunks = thread_count();
  const std::size_t levels = net.s_max() + 1;
  struct Partial {
    double semigroup = 0.0;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    double residual = 0.0;
    std::size_t count = 0;
  };
  std::vector<Partial> parts(chunks);
  parallel_chunks(n, chunks, [&](std::size_t c, std::size_t begin, std::size_t end) {
    auto& p = parts[c];
    for (std::size_t i = begin; i < end; ++i) {
      std::vector<BlockVector> f(levels);
      for (std::size_t s = 0; s < levels; ++s) f[s] = F_s(sp, Integer(s), vec[i]);
      for (std::size_t t = 0; t < levels; ++t) {
        for (std::size_t s = 0; s < levels; ++s) {
          p.semigroup = std::max(p.semigroup, max_coord_gap(F_s(sp, Integer(s), f[t]), f[std::min(s, t)]));
        }
      }
      const auto seq = sk_sequence(sp, net.point(i));
      for (std::size_t k = 0; k + 1 < seq.size(); ++k) {
        const BlockVector& y = f[static_cast<std::size_t>(seq[k])];
        for (Integer s = seq[k + 1]; s <= seq[k]; ++s) {
          const auto step = radial_step_lambda(sp, s, seq[k + 1], y);
          p.lo = std::min(p.lo, step.lambda);
          p.hi = std::max(p.hi, step.lambda);
          p.residual = std::max({p.residual, step.residual, step.hypothesis});
          ++p.count;
        }
      }
    }
  });
  out.lambda_min = std::numeric_limits<double>::infinity();
  out.lambda_max = -std::numeric_limits<double>::infinity();
  for (const auto& p : parts) {
    out.semigroup_deviation = std::max(out.semigroup_deviation, p.semigroup);
    out.lambda_min = std::min(out.lambda_min, p.lo);
    out.lambda_max = std::max(out.lambda_max, p.hi);
    out.lambda_residual = std::max(out.lambda_residual, p.residual);
    out.lambda_instances += p.count;
  }
  if (out.lambda_instances == 0) out.lambda_min = out.lambda_max = 0.0;
  return out;
}

std::vector<IdentityCheck> check_grid_identities(const GridNet& net) {
  const auto& sp = net.space();
  const std::vector<std::string> names{"boundary",     "weighted-sum", "local-step",        "sk-recurrence",
                                       "sk-collapse",  "sk-shift",     "closed-form",       "naive-composition",
                                       "tables"};
  const std::size_t chunks = thread_count();
  std::vector<std::vector<IdentityCheck>> parts(chunks);
  parallel_chunks(net.size(), chunks, [&](std::size_t c, std::size_t begin, std::size_t end) {
    auto& out = parts[c];
    for (const auto& name : names) out.push_back({name});
    auto record = [&](std::size_t which, bool ok, std::size_t i, long long param) {
      auto& check = out[which];
      ++check.checked;
      if (!ok && check.pass) {
        check.pass = false;
        check.point = i;
        check.parameter = param;
      }
    };
    for (std::size_t i = begin; i < end; ++i) {
      const GridPoint& x = net.point(i);
      const Integer s = s_of(sp, x);
      record(0, in_diamond(sp, x, s) && (s == 0 || !in_diamond(sp, x, s - 1)), i, 0);
      if (s > 0) {
        Rational sum = 0;
        for (std::size_t b = 0; b < x.blocks.size(); ++b) {
          sum += Rational(x.blocks[b].radius) / sp.q().r(static_cast<int>(b) + 1, s);
        }
        record(1, sum == 1, i, 0);
        const Integer dropped = s - sp.q()[x.n()];
        record(2, s_of(sp, local_phi(sp, x)) == dropped && s_of(sp, phi_grid(sp, s - 1, x)) == dropped, i, 0);
      }
      // Definition: s_0 = s(x), s_{k+1} = s(phi_{s_k - 1}(x)).
      std::vector<Integer> def{s};
      while (def.back() > 0) def.push_back(s_of(sp, phi_grid(sp, def.back() - 1, x)));
      const auto seq = sk_sequence(sp, x);
      record(3, seq == def, i, 0);
      for (std::size_t k = 0; k + 1 < seq.size(); ++k) {
        record(4, phi_grid(sp, seq[k] - 1, x) == phi_grid(sp, seq[k + 1], x), i, static_cast<long long>(k));
        for (std::size_t j = 0; j <= k; ++j) {
          const auto inner = sk_sequence(sp, phi_grid(sp, seq[k - j], x));
          record(5, j < inner.size() && inner[j] == seq[k], i, static_cast<long long>(k));
        }
      }
      const int total = x.total_norm();
      for (int k = 1; k <= total; ++k) {
        const auto sk = static_cast<std::size_t>(k) < seq.size() ? seq[static_cast<std::size_t>(k)] : Integer(0);
        record(6, phi_closed_form(sp, k, x) == phi_grid(sp, sk, x), i, k);
      }
      for (std::size_t t = 0; t <= net.s_max(); ++t) {
        const auto y = phi_grid(sp, Integer(t), x);
        if (Integer(t) <= s) record(7, y == phi_grid_naive(sp, Integer(t), x), i, static_cast<long long>(t));
        record(8, net.phi(t, i) == net.position_of(y), i, static_cast<long long>(t));
      }
    }
  });
  std::vector<IdentityCheck> out;
  for (const auto& name : names) out.push_back({name});
  for (const auto& part : parts) {
    for (std::size_t w = 0; w < part.size(); ++w) {
      out[w].checked += part[w].checked;
      if (!part[w].pass && out[w].pass) {
        out[w].pass = false;
        out[w].point = part[w].point;
        out[w].parameter = part[w].parameter;
      }
    }
  }
  return out;
}

}  // namespace lipnet
