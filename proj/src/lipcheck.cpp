// SPDX-License-Identifier: Apache-2.0
#include "lipnet/lipcheck.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <random>
#include <sstream>

#include "lipnet/parallel.hpp"

namespace lipnet {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Best {
  double value = -1.0;
  Witness witness;

  void offer(double v, const Witness& w) {
    if (v > value || (v == value && w.before(witness))) {
      value = v;
      witness = w;
      witness.value = v;
    }
  }
  void merge(const Best& other) {
    if (other.value >= 0.0) offer(other.value, other.witness);
  }
};

void atomic_max(std::atomic<double>& target, double v) {
  double cur = target.load(std::memory_order_relaxed);
  while (v > cur && !target.compare_exchange_weak(cur, v, std::memory_order_relaxed)) {
  }
}

double typical_spacing(const PointSet& points) {
  double lo = kInf;
  double hi = -kInf;
  for (double c : points.flat()) {
    lo = std::min(lo, c);
    hi = std::max(hi, c);
  }
  const double d = static_cast<double>(std::min<std::size_t>(points.dim(), GridIndex::kMaxIndexedDims));
  const double n = static_cast<double>(std::max<std::size_t>(points.size(), 2));
  return std::max((hi - lo) / std::pow(n, 1.0 / d), 1e-6);
}

// Branch structure of one level: on [b, t_j) point j maps to first[j], on [t_j, e) to second[j].
struct LevelView {
  std::size_t b = 0;
  std::size_t e = 0;
  std::vector<std::uint32_t> t;
  std::vector<std::uint32_t> first;
  std::vector<std::uint32_t> second;

  LevelView(const RetractionFamily& family, std::size_t level)
      : b(family.level_begin(level)), e(family.level_end(level)) {
    const auto n = family.size();
    const auto& up = family.level_map(level);
    const auto& lo = level == 0 ? up : family.level_map(level - 1);
    const bool standard = family.rule() == BranchRule::Standard;
    t.resize(n);
    first.resize(n);
    second.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
      t[j] = static_cast<std::uint32_t>(std::clamp<std::size_t>(up[j], b, e));
      first[j] = standard ? lo[j] : up[j];
      second[j] = standard ? up[j] : lo[j];
    }
  }

  [[nodiscard]] bool uses_first(std::size_t j) const { return t[j] > b; }
  [[nodiscard]] bool uses_second(std::size_t j) const { return t[j] < e; }
  [[nodiscard]] bool fixed(std::size_t j) const {
    return (!uses_first(j) || first[j] == j) && (!uses_second(j) || second[j] == j);
  }

  // Calls fn(begin, end, u, v): on indices [begin, end) the pair (x, y) maps to (u, v).
  template <typename Fn>
  void pair_pieces(std::size_t x, std::size_t y, Fn&& fn) const {
    const std::size_t tx = t[x];
    const std::size_t ty = t[y];
    const std::size_t t1 = std::min(tx, ty);
    const std::size_t t2 = std::max(tx, ty);
    if (b < t1) fn(b, t1, first[x], first[y]);
    if (t1 < t2) {
      if (tx < ty) {
        fn(t1, t2, second[x], first[y]);
      } else {
        fn(t1, t2, first[x], second[y]);
      }
    }
    if (t2 < e) fn(t2, e, second[x], second[y]);
  }
};

// Offline range-max over [0, n): O(1) per update, O(n log n) to resolve.
class RangeMax {
 public:
  explicit RangeMax(std::size_t n) : n_(n) {
    std::size_t levels = 1;
    while ((std::size_t{1} << levels) <= n) ++levels;
    tab_.assign(levels, std::vector<double>(n, 0.0));
  }
  void update(std::size_t l, std::size_t r, double v) {
    const std::size_t len = r - l;
    const auto p = static_cast<std::size_t>(floor_log2(static_cast<int>(len)));
    tab_[p][l] = std::max(tab_[p][l], v);
    tab_[p][r - (std::size_t{1} << p)] = std::max(tab_[p][r - (std::size_t{1} << p)], v);
  }
  std::vector<double> resolve() {
    for (std::size_t p = tab_.size() - 1; p >= 1; --p) {
      const std::size_t half = std::size_t{1} << (p - 1);
      for (std::size_t i = 0; i + (std::size_t{1} << p) <= n_; ++i) {
        tab_[p - 1][i] = std::max(tab_[p - 1][i], tab_[p][i]);
        tab_[p - 1][i + half] = std::max(tab_[p - 1][i + half], tab_[p][i]);
      }
    }
    return tab_[0];
  }

 private:
  std::size_t n_;
  std::vector<std::vector<double>> tab_;
};

Best level_exhaustive(const PointSet& pts, const LevelView& view, RangeMax* ranges,
                      std::uint64_t& pairs) {
  Best best;
  const auto n = pts.size();
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = x + 1; y < n; ++y) {
      const double d = pts.distance(x, y);
      ++pairs;
      view.pair_pieces(x, y, [&](std::size_t lo, std::size_t hi, std::size_t u, std::size_t v) {
        const double r = (u == v ? 0.0 : pts.distance(u, v)) / d;
        best.offer(r, {lo, x, y, r});
        if (ranges) ranges->update(lo, hi, r);
      });
    }
  }
  return best;
}

Best level_pruned(const PointSet& pts, const LevelView& view, const GridIndex& grid,
                  double seed_radius, std::uint64_t& pairs) {
  const auto n = pts.size();
  std::vector<double> disp(n, 0.0);
  std::vector<double> reach(n, 0.0);
  std::vector<std::size_t> moving;
  std::size_t fixed0 = n;
  std::size_t fixed1 = n;
  double disp_max = 0.0;
  double reach_max = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    if (view.uses_first(j)) {
      disp[j] = std::max(disp[j], pts.distance(view.first[j], j));
      reach[j] = std::max(reach[j], pts.norm(view.first[j]));
    }
    if (view.uses_second(j)) {
      disp[j] = std::max(disp[j], pts.distance(view.second[j], j));
      reach[j] = std::max(reach[j], pts.norm(view.second[j]));
    }
    disp_max = std::max(disp_max, disp[j]);
    reach_max = std::max(reach_max, reach[j]);
    if (view.fixed(j)) {
      if (fixed0 == n) {
        fixed0 = j;
      } else if (fixed1 == n) {
        fixed1 = j;
      }
    } else {
      moving.push_back(j);
    }
  }

  Best best;
  // Two points fixed at every index of the level keep their distance.
  if (fixed1 < n) best.offer(1.0, {view.b, fixed0, fixed1, 1.0});

  std::atomic<double> shared(std::max(best.value, 0.0));
  std::atomic<std::uint64_t> counted(0);
  const std::size_t chunks = thread_count();
  std::vector<Best> local(chunks);
  std::vector<char> is_moving(n, 0);
  for (auto j : moving) is_moving[j] = 1;

  auto visit = [&](Best& acc, std::uint64_t& cnt, std::size_t x, std::size_t y) {
    const double d = pts.distance(x, y);
    ++cnt;
    const auto a = std::min(x, y);
    const auto c = std::max(x, y);
    view.pair_pieces(a, c, [&](std::size_t lo, std::size_t, std::size_t u, std::size_t v) {
      const double r = (u == v ? 0.0 : pts.distance(u, v)) / d;
      acc.offer(r, {lo, a, c, r});
    });
  };

  // Local pass: nearby pairs carry the large ratios and seed the pruning threshold.
  parallel_chunks(moving.size(), chunks, [&](std::size_t ch, std::size_t begin, std::size_t end) {
    std::uint64_t cnt = 0;
    for (std::size_t k = begin; k < end; ++k) {
      const auto x = moving[k];
      grid.for_each_in_box(pts.row(x), seed_radius, [&](std::size_t y) {
        if (y == x || (is_moving[y] && y < x)) return;
        visit(local[ch], cnt, x, y);
      });
      atomic_max(shared, local[ch].value);
    }
    counted += cnt;
  });
  for (const auto& l : local) best.merge(l);
  atomic_max(shared, best.value);

  // Full pass. For a pair at distance d every ratio is at most 1 + (disp_x + disp_y) / d and
  // (reach_x + reach_y) / d; pairs where either bound is strictly below the running max are skipped.
  parallel_chunks(moving.size(), chunks, [&](std::size_t ch, std::size_t begin, std::size_t end) {
    std::uint64_t cnt = 0;
    for (std::size_t k = begin; k < end; ++k) {
      const auto x = moving[k];
      if (reach[x] + reach_max == 0.0) continue;  // every image is the origin: ratio 0
      const double K = shared.load(std::memory_order_relaxed);
      double radius = kInf;
      if (K > 1.0) radius = std::min(radius, (disp[x] + disp_max) / (K - 1.0));
      if (K > 0.0) radius = std::min(radius, (reach[x] + reach_max) / K);
      auto consider = [&](std::size_t y) {
        if (y == x || (is_moving[y] && y < x)) return;
        visit(local[ch], cnt, x, y);
      };
      if (std::isinf(radius)) {
        for (std::size_t y = 0; y < n; ++y) consider(y);
      } else {
        grid.for_each_in_box(pts.row(x), radius * (1.0 + 1e-9) + 1e-12, [&](std::size_t y) {
          if (pts.distance(x, y) > radius * (1.0 + 1e-9) + 1e-12) return;
          consider(y);
        });
      }
      atomic_max(shared, local[ch].value);
    }
    counted += cnt;
  });
  for (const auto& l : local) best.merge(l);
  pairs += counted.load();
  return best;
}

struct Trajectories {
  // Point j owns pieces [offset[j], offset[j+1]): piece k covers [start[k], start[k+1]) or up to N.
  std::vector<std::size_t> offset;
  std::vector<std::uint32_t> start;
  std::vector<std::uint32_t> value;
  std::size_t n = 0;

  [[nodiscard]] std::size_t piece_end(std::size_t j, std::size_t k) const {
    return k + 1 < offset[j + 1] ? start[k + 1] : n;
  }
};

Trajectories build_trajectories(const RetractionFamily& family) {
  Trajectories tr;
  tr.n = family.size();
  std::vector<LevelView> views;
  for (std::size_t level = 0; level < family.level_count(); ++level) {
    if (family.level_begin(level) < family.level_end(level)) views.emplace_back(family, level);
  }
  tr.offset.reserve(tr.n + 1);
  tr.offset.push_back(0);
  for (std::size_t j = 0; j < tr.n; ++j) {
    auto push = [&](std::size_t s, std::uint32_t v) {
      if (tr.start.size() > tr.offset.back() && tr.value.back() == v) return;
      tr.start.push_back(static_cast<std::uint32_t>(s));
      tr.value.push_back(v);
    };
    for (const auto& view : views) {
      if (view.uses_first(j)) push(view.b, view.first[j]);
      if (view.uses_second(j)) push(view.t[j], view.second[j]);
    }
    tr.offset.push_back(tr.start.size());
  }
  return tr;
}

std::string describe(const Witness& w, const char* what) {
  std::ostringstream os;
  os << what << " (index " << w.index << ", " << w.first << ", " << w.second << ")";
  return os.str();
}

}  // namespace

LipResult lipschitz_norm(const PointSet& points, const PointSet& images, const LipOptions& options) {
  const auto n = points.size();
  if (n < 2) throw PreconditionError("Lipschitz norm needs at least two points");
  if (images.size() != n) throw DimensionMismatch("image count differs from the point count");
  auto ratio = [&](std::size_t i, std::size_t j) {
    const double d = points.distance(i, j);
    if (!(d > 0.0)) throw PreconditionError("Lipschitz norm over repeated points");
    return images.distance(i, j) / d;
  };
  LipResult out;
  out.value = -1.0;
  auto offer = [](LipResult& acc, double r, std::size_t i, std::size_t j) {
    if (r > acc.value || (r == acc.value && std::pair{i, j} < std::pair{acc.first, acc.second})) {
      acc.value = r;
      acc.first = i;
      acc.second = j;
    }
  };
  if (options.mode == LipMode::Sampled) {
    std::mt19937_64 rng(options.seed);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    for (std::size_t s = 0; s < options.samples; ++s) {
      std::size_t i = pick(rng);
      std::size_t j = pick(rng);
      if (i == j) continue;
      if (i > j) std::swap(i, j);
      offer(out, ratio(i, j), i, j);
      ++out.pairs;
    }
    out.value = std::max(out.value, 0.0);
    return out;
  }
  const std::size_t chunks = thread_count();
  std::vector<LipResult> local(chunks);
  for (auto& l : local) l.value = -1.0;
  // Rows are dealt out round-robin so the triangular workload stays balanced.
  parallel_chunks(chunks, chunks, [&](std::size_t c, std::size_t, std::size_t) {
    for (std::size_t i = c; i < n; i += chunks) {
      for (std::size_t j = i + 1; j < n; ++j) offer(local[c], ratio(i, j), i, j);
      local[c].pairs += n - i - 1;
    }
  });
  for (const auto& l : local) {
    if (l.value >= 0.0) offer(out, l.value, l.first, l.second);
    out.pairs += l.pairs;
  }
  return out;
}

LipResult lipschitz_norm(const std::vector<Vector>& points,
                         const std::function<Vector(const Vector&)>& map, const LipOptions& options) {
  if (points.size() < 2) throw PreconditionError("Lipschitz norm needs at least two points");
  std::vector<Vector> images;
  images.reserve(points.size());
  for (const auto& p : points) images.push_back(map(p));
  return lipschitz_norm(PointSet::from_vectors(points), PointSet::from_vectors(images), options);
}

FamilyLipschitz family_lipschitz(const RetractionFamily& family, const CertOptions& options) {
  FamilyLipschitz out;
  const auto& pts = family.points();
  const auto n = pts.size();
  const auto levels = family.level_count();
  out.per_level.assign(levels, 0.0);
  out.per_level_witness.assign(levels, Witness{});
  if (n < 2) {
    out.per_index.assign(n, 0.0);
    return out;
  }
  const double work = static_cast<double>(levels) * static_cast<double>(n) * static_cast<double>(n);
  const bool exhaustive = work <= static_cast<double>(options.per_index_budget);
  out.pruned = !exhaustive;
  std::optional<RangeMax> ranges;
  if (exhaustive) ranges.emplace(n);
  std::optional<GridIndex> grid;
  const double spacing = typical_spacing(pts);
  if (!exhaustive) {
    grid.emplace(pts.dim(), spacing);
    for (std::size_t i = 0; i < n; ++i) grid->insert(i, pts.row(i));
  }
  Best overall;
  for (std::size_t level = 0; level < levels; ++level) {
    if (family.level_begin(level) == family.level_end(level)) continue;
    const LevelView view(family, level);
    Best best = exhaustive ? level_exhaustive(pts, view, ranges ? &*ranges : nullptr, out.pairs_evaluated)
                           : level_pruned(pts, view, *grid, 1.5 * spacing, out.pairs_evaluated);
    if (best.value <= 0.0) best = Best{0.0, {view.b, 0, 1, 0.0}};  // every pair ties at 0
    out.per_level[level] = best.value;
    out.per_level_witness[level] = best.witness;
    overall.offer(best.value, best.witness);
  }
  out.max = std::max(overall.value, 0.0);
  out.witness = overall.witness;
  if (ranges) out.per_index = ranges->resolve();
  return out;
}

AxiomCheck check_image_axiom(const RetractionFamily& family) {
  AxiomCheck check{"image", true, "image of phi_m is the first m+1 points, each fixed", std::nullopt};
  std::optional<Witness> worst;
  auto fail = [&](const Witness& w) {
    if (!worst || w.before(*worst)) worst = w;
  };
  for (std::size_t level = 0; level < family.level_count(); ++level) {
    if (family.level_begin(level) == family.level_end(level)) continue;
    const LevelView view(family, level);
    for (std::size_t j = 0; j < family.size(); ++j) {
      auto piece = [&](std::size_t p, std::size_t q, std::size_t v) {
        if (p >= q) return;
        if (v > p) fail({p, j, v, 0.0});  // phi_p(j) = v lies beyond the prefix
        const std::size_t from = std::max(p, j);
        if (from < q && v != j) fail({from, j, v, 0.0});  // j is in the prefix but moves
      };
      piece(view.b, view.t[j], view.first[j]);
      piece(view.t[j], view.e, view.second[j]);
    }
  }
  if (worst) {
    check.pass = false;
    check.witness = worst;
    check.detail = describe(*worst, "phi_index(first) = second violates the retraction axiom");
  }
  return check;
}

AxiomCheck check_commutation(const RetractionFamily& family) {
  AxiomCheck check{"commutation", true, "exact on all index pairs via per-point trajectories", std::nullopt};
  const auto tr = build_trajectories(family);
  const auto n = family.size();
  // stable[y]: smallest index from which phi_index(y) == y for good.
  std::vector<std::size_t> stable(n, n);
  for (std::size_t y = 0; y < n; ++y) {
    const auto last = tr.offset[y + 1] - 1;
    if (tr.offset[y + 1] > tr.offset[y] && tr.value[last] == y) stable[y] = tr.start[last];
  }
  std::optional<Witness> worst;
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t k = tr.offset[x]; k < tr.offset[x + 1]; ++k) {
      const std::size_t p = tr.start[k];
      const std::size_t q = tr.piece_end(x, k);
      const std::size_t y = tr.value[k];
      if (y == x) continue;
      // phi_n(phi_m(x)) = phi_m(x) for m in [p, q) and every n > m.
      if (p + 1 < n && stable[y] > p + 1) {
        Witness w{p, p + 1, x, 0.0};
        for (std::size_t ky = tr.offset[y]; ky < tr.offset[y + 1]; ++ky) {
          if (tr.value[ky] != y && tr.piece_end(y, ky) > p + 1) {
            w.first = std::max<std::size_t>(tr.start[ky], p + 1);
            break;
          }
        }
        if (!worst || w.before(*worst)) worst = w;
      }
      // phi_m(phi_n(x)) = phi_m(x) for n in [p, q) and every m < n: compare on [0, q - 1).
      std::size_t kx = tr.offset[x];
      std::size_t ky = tr.offset[y];
      std::size_t idx = 0;
      while (idx + 1 < q) {
        if (tr.value[kx] != tr.value[ky]) {
          Witness w{idx, std::max(p, idx + 1), x, 0.0};
          if (!worst || w.before(*worst)) worst = w;
          break;
        }
        const std::size_t nx = tr.piece_end(x, kx);
        const std::size_t ny = tr.piece_end(y, ky);
        idx = std::min(nx, ny);
        if (idx == nx) ++kx;
        if (idx == ny) ++ky;
        if (kx >= tr.offset[x + 1] || ky >= tr.offset[y + 1]) break;
      }
    }
  }
  if (worst) {
    check.pass = false;
    check.witness = worst;
    check.detail = describe(*worst, "phi_index and phi_first fail to commute at point second");
  }
  return check;
}

AxiomCheck check_commutation_naive(const RetractionFamily& family, std::size_t subsample,
                                   std::uint64_t seed) {
  const auto n = family.size();
  AxiomCheck check{"commutation-literal", true, "", std::nullopt};
  auto test = [&](std::size_t m, std::size_t k) -> bool {
    // m < k
    for (std::size_t x = 0; x < n; ++x) {
      const auto low = family.eval(m, x);
      if (family.eval(m, family.eval(k, x)) != low || family.eval(k, low) != low) {
        check.pass = false;
        check.witness = Witness{m, k, x, 0.0};
        check.detail = describe(*check.witness, "literal commutation fails");
        return false;
      }
    }
    return true;
  };
  if (subsample == 0) {
    check.detail = "all index pairs, all points";
    for (std::size_t k = 1; k < n; ++k) {
      for (std::size_t m = 0; m < k; ++m) {
        if (!test(m, k)) return check;
      }
    }
    return check;
  }
  check.detail = std::to_string(subsample) + " seeded index pairs (seed " + std::to_string(seed) + "), all points";
  if (n < 2) return check;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  for (std::size_t s = 0; s < subsample; ++s) {
    std::size_t m = pick(rng);
    std::size_t k = pick(rng);
    if (m == k) continue;
    if (m > k) std::swap(m, k);
    if (!test(m, k)) return check;
  }
  return check;
}

bool CertReport::pass() const {
  for (const auto& a : axioms) {
    if (!a.pass) return false;
  }
  for (const auto& b : bounds) {
    if (!b.pass) return false;
  }
  return true;
}

const AxiomCheck* CertReport::axiom(const std::string& name) const {
  for (const auto& a : axioms) {
    if (a.name == name) return &a;
  }
  return nullptr;
}

const BoundEntry* CertReport::bound(const std::string& name) const {
  for (const auto& b : bounds) {
    if (b.name == name) return &b;
  }
  return nullptr;
}

CertReport check_retractional_axioms(const RetractionFamily& family, const CertOptions& options) {
  CertReport report;
  const auto n = family.size();
  report.point_count = n;
  report.level_count = family.level_count();
  report.axioms.push_back(check_image_axiom(family));
  report.axioms.push_back({"union", family.level_offsets().back() == n,
                           "the last index retracts onto all " + std::to_string(n) + " points", std::nullopt});
  report.lipschitz = family_lipschitz(family, options);
  AxiomCheck lip{"lipschitz", report.lipschitz.max <= family.theoretical_bound() + kBoundTolerance, "",
                 report.lipschitz.witness};
  {
    std::ostringstream os;
    os << "max constant " << report.lipschitz.max << " vs bound " << family.theoretical_bound();
    lip.detail = os.str();
  }
  report.axioms.push_back(lip);
  report.bounds.push_back({"family-lipschitz", report.lipschitz.max, family.theoretical_bound(),
                           lip.pass, report.lipschitz.witness.first,
                           static_cast<long long>(report.lipschitz.witness.index)});
  report.axioms.push_back(check_commutation(family));
  const double literal = static_cast<double>(n) * static_cast<double>(n) * static_cast<double>(n) / 2.0;
  if (literal <= static_cast<double>(options.naive_commutation_budget)) {
    report.axioms.push_back(check_commutation_naive(family, 0, options.seed));
  } else if (options.commutation_subsample > 0) {
    report.axioms.push_back(check_commutation_naive(family, options.commutation_subsample, options.seed));
  } else {
    report.skipped.push_back("commutation-literal: " + std::to_string(static_cast<long long>(literal)) +
                             " evaluations exceed the budget; the trajectory check covers all pairs");
  }
  return report;
}

BoundEntry check_bound(const std::string& name, std::size_t count,
                       const std::function<double(std::size_t, long long&)>& gap, double bound) {
  BoundEntry entry{name, 0.0, bound, true, 0, 0};
  std::vector<double> gaps(count, 0.0);
  std::vector<long long> params(count, 0);
  parallel_chunks(count, thread_count(), [&](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) gaps[i] = gap(i, params[i]);
  });
  for (std::size_t i = 0; i < count; ++i) {
    if (gaps[i] > entry.measured) {
      entry.measured = gaps[i];
      entry.point = i;
      entry.parameter = params[i];
    }
  }
  entry.pass = entry.measured <= bound + kBoundTolerance;
  return entry;
}

GriddabilityReport check_griddability(const BlockSpace& space,
                                      const std::vector<std::vector<Vector>>& block_nets,
                                      const std::vector<NetParams>& block_params, double radius,
                                      std::size_t samples, std::uint64_t seed) {
  const auto k = space.block_count();
  if (block_nets.size() != k || block_params.size() != k) {
    throw DimensionMismatch("one net and one parameter pair per block expected");
  }
  GriddabilityReport report;
  report.separation_target = kInf;
  for (std::size_t i = 0; i < k; ++i) {
    if (block_nets[i].empty()) throw PreconditionError("empty block net");
    block_params[i].validate();
    report.separation_target = std::min(report.separation_target, block_params[i].a);
    report.density_target = std::max(report.density_target, block_params[i].b);
    for (const auto& p : block_nets[i]) {
      if (p.dim() != space.block(i).dim || p.kind() != space.block(i).kind) {
        throw DimensionMismatch("block net point does not match its block");
      }
    }
  }
  std::vector<double> flat;
  std::vector<std::size_t> digit(k, 0);
  while (true) {
    for (std::size_t i = 0; i < k; ++i) {
      const auto c = block_nets[i][digit[i]].coords();
      flat.insert(flat.end(), c.begin(), c.end());
    }
    ++report.grid_points;
    std::size_t i = 0;
    while (i < k && ++digit[i] == block_nets[i].size()) digit[i++] = 0;
    if (i == k) break;
  }
  const PointSet grid(Metric::block_sum(space), std::move(flat));
  report.min_pairwise_distance = min_pairwise_distance(grid).distance;

  std::vector<std::vector<Vector>> block_samples;
  for (std::size_t i = 0; i < k; ++i) {
    RegionSampler sampler{RegionKind::Ball, space.block(i).dim, space.block(i).kind, radius, samples,
                          seed + i};
    block_samples.push_back(sampler.sample());
  }
  const NearestSearch search(grid, report.separation_target);
  std::vector<double> row;
  for (std::size_t s = 0; s < samples; ++s) {
    row.clear();
    for (std::size_t i = 0; i < k; ++i) {
      const auto c = block_samples[i][s].coords();
      row.insert(row.end(), c.begin(), c.end());
    }
    report.max_sample_distance = std::max(report.max_sample_distance, search.nearest(row.data()).distance);
  }
  report.samples = samples;
  report.separated = report.min_pairwise_distance >= report.separation_target - kSeparationTolerance;
  report.dense = report.max_sample_distance <= report.density_target + kTolerance;
  return report;
}

}  // namespace lipnet
