// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lipnet/freenorm.hpp"
#include "lipnet/grid_fdd.hpp"
#include "lipnet/io.hpp"
#include "lipnet/lipcheck.hpp"
#include "lipnet/nets.hpp"
#include "lipnet/parallel.hpp"
#include "lipnet/retract_fd.hpp"
#include "report.hpp"

namespace lipnet::cli {
namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitParse = 3;
constexpr int kExitBudget = 4;

/// Invalid configuration values.
class UsageError : public Error {
 public:
  using Error::Error;
};

struct Config {
  // Space and net.
  std::string kind = "spiderweb";
  std::size_t dim = 1;
  std::string norm = "LINF";
  double a = 1.0;
  double b = 0.0;
  double radius = 4.0;
  double mesh = 0.0;
  std::string rule = "standard";
  // Grid.
  std::size_t blocks = 2;
  std::string dims = "2";
  std::string norms = "LINF";
  std::string ambient = "SUP";
  int cap = 4;
  bool contrast = false;
  // Checks.
  std::string checks = "all";
  std::string sweep_dims = "1,2,3";
  std::size_t samples = 500;
  std::size_t points = 40;
  std::size_t grid_samples = 10000;
  std::uint64_t naive_budget = 10'000'000;
  std::size_t subsample = 0;
  int base_radius = -1;
  std::optional<double> max_k;
  std::uint64_t seed = 1;
  // Files.
  std::string input;
  std::string output;
  std::string report;
  std::string csv;
};

std::vector<std::string> split(const std::string& text, char sep = ',') {
  std::vector<std::string> out;
  std::stringstream in(text);
  for (std::string t; std::getline(in, t, sep);) {
    if (!t.empty()) out.push_back(t);
  }
  return out;
}

double default_mesh(std::size_t dim) { return dim <= 2 ? 0.25 : 0.5; }

NormKind norm_of_config(const std::string& text) {
  try {
    return parse_norm_kind(text);
  } catch (const PreconditionError& e) {
    throw UsageError(e.what());
  }
}

NetParams params_of(const Config& c) {
  if (!(c.a > 0.0) || !std::isfinite(c.a)) throw UsageError("--a must be positive");
  NetParams p{c.a, c.b > 0.0 ? c.b : 2.0 * c.a};
  if (c.b < 0.0) throw UsageError("--b must be positive");
  if (p.a > 2.0 * p.b) throw UsageError("--a must not exceed 2 b");
  return p;
}

BranchRule rule_of(const std::string& r) {
  if (r == "standard") return BranchRule::Standard;
  if (r == "flipped") return BranchRule::Flipped;
  throw UsageError("--rule must be standard or flipped");
}

/// Family constant gate of verify and sweep: (12b+2)/a, two below the formula bound.
double gate_bound(const NetParams& p) { return (12.0 * p.b + 2.0) / p.a; }

std::set<std::string> checks_of(const Config& c, const std::set<std::string>& known) {
  std::set<std::string> out;
  for (const auto& t : split(c.checks)) {
    if (t == "all") {
      out.insert(known.begin(), known.end());
    } else if (known.contains(t)) {
      out.insert(t);
    } else {
      throw UsageError("unknown check '" + t + "'");
    }
  }
  return out;
}

Json config_json(const Config& c, const std::string& command) {
  Json j{{"command", command}, {"seed", c.seed}};
  if (command == "generate") {
    j["kind"] = c.kind;
  }
  if (!c.input.empty()) j["input"] = c.input;
  return j;
}

std::ifstream open_input(const std::string& path) {
  if (path.empty()) throw UsageError("an input file is required");
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  return in;
}

void write_outputs(const Config& c, const Json& report, const Csv& csv) {
  const auto text = report.dump(2) + "\n";
  if (c.report.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(c.report);
    if (!out) throw UsageError("cannot write '" + c.report + "'");
    out << text;
  }
  if (!c.csv.empty()) {
    std::ofstream out(c.csv);
    if (!out) throw UsageError("cannot write '" + c.csv + "'");
    csv.write(out);
  }
}

Json base_report(const Config& c, const std::string& command) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["config"] = config_json(c, command);
  return j;
}

std::shared_ptr<const SpiderwebBase> build_base(std::size_t dim, NormKind kind, double a, int radius, double mesh) {
  const int levels = floor_log2(std::max(radius, 1));
  return std::make_shared<const SpiderwebBase>(build_spiderweb_base(dim, kind, a, levels, mesh));
}

std::vector<BlockSpec> block_specs(const Config& c) {
  if (c.blocks < 1 || c.blocks > 8) throw UsageError("--blocks must lie in 1..8");
  auto dims = split(c.dims);
  auto norms = split(c.norms);
  if (dims.size() == 1) dims.assign(c.blocks, dims[0]);
  if (norms.size() == 1) norms.assign(c.blocks, norms[0]);
  if (dims.size() != c.blocks || norms.size() != c.blocks) throw UsageError("--dims and --norms need one entry or one per block");
  std::vector<BlockSpec> specs;
  for (std::size_t i = 0; i < c.blocks; ++i) {
    int d = 0;
    try {
      d = std::stoi(dims[i]);
    } catch (const std::exception&) {
      throw UsageError("bad block dimension '" + dims[i] + "'");
    }
    if (d < 1 || d > 16) throw UsageError("block dimensions must lie in 1..16");
    specs.push_back({static_cast<std::size_t>(d), norm_of_config(norms[i])});
  }
  return specs;
}

AmbientNorm ambient_of(const std::string& text) {
  try {
    return parse_ambient(text);
  } catch (const PreconditionError& e) {
    throw UsageError(e.what());
  }
}

// ---------------------------------------------------------------------------------------------
// generate

int cmd_generate(const Config& c) {
  std::ostringstream out;
  if (c.kind == "spiderweb") {
    const auto p = params_of(c);
    if (!(p.a < 2.0)) throw UsageError("spiderweb separation --a must lie in (0, 2)");
    const double r = std::floor(c.radius);
    if (r != c.radius || r < 1 || r > 1024) throw UsageError("spiderweb --radius must be an integer in 1..1024");
    const auto kind = norm_of_config(c.norm);
    if (c.dim < 1 || c.dim > 16) throw UsageError("--dim must lie in 1..16");
    const double mesh = c.mesh > 0.0 ? c.mesh : default_mesh(c.dim);
    auto base = build_base(c.dim, kind, p.a, static_cast<int>(r), mesh);
    write_spiderweb(out, Spiderweb{base, {}, p, static_cast<int>(r)}, rule_of(c.rule));
  } else if (c.kind == "net") {
    const auto p = params_of(c);
    if (!(c.radius > 0.0)) throw UsageError("--radius must be positive");
    const auto kind = norm_of_config(c.norm);
    if (c.dim < 1 || c.dim > 16) throw UsageError("--dim must lie in 1..16");
    write_net(out, NetFile{c.dim, kind, p, random_net(c.dim, kind, p.a, c.radius, c.seed)});
  } else if (c.kind == "grid") {
    const auto p = params_of(c);
    if (!(p.a < 2.0)) throw UsageError("grid separation --a must lie in (0, 2)");
    if (c.cap < 1 || c.cap > 64) throw UsageError("--cap must lie in 1..64");
    const auto specs = block_specs(c);
    double mesh = c.mesh;
    if (mesh <= 0.0) {
      mesh = 0.25;
      for (const auto& s : specs) mesh = std::max(mesh, default_mesh(s.dim));
    }
    const auto space = build_grid_space(specs, ambient_of(c.ambient), p.a, c.cap, mesh);
    write_grid(out, space, space.enumerate());
  } else {
    throw UsageError("--kind must be spiderweb, net or grid");
  }
  if (c.output.empty()) {
    std::cout << out.str();
  } else {
    std::ofstream f(c.output, std::ios::binary);
    if (!f) throw UsageError("cannot write '" + c.output + "'");
    f << out.str();
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------------------------
// verify

CertOptions cert_options(const Config& c) {
  CertOptions o;
  o.naive_commutation_budget = c.naive_budget;
  o.commutation_subsample = c.subsample;
  o.seed = c.seed;
  return o;
}

void per_level_csv(Csv& csv, const RetractionFamily& family, const CertReport& r) {
  for (std::size_t l = 0; l < family.level_count(); ++l) {
    const auto& w = r.lipschitz.per_level_witness[l];
    csv.row({cell(l), cell(family.level_begin(l)), cell(family.level_end(l)), cell(r.lipschitz.per_level[l]),
             cell(w.index), cell(w.first), cell(w.second)});
  }
}

Csv level_csv() { return Csv({"level", "begin", "end", "measured", "witness_index", "witness_first", "witness_second"}); }

int verify_spiderweb(const Config& c, const SpiderwebFile& file, Json& report, Csv& csv) {
  const std::set<std::string> known{"axioms", "radial", "naive", "freenorm"};
  const auto checks = checks_of(c, known);
  const OrderedNet net(file.web);
  const auto family = net.family(file.rule);
  const auto& p = file.web.params;
  bool pass = true;

  report["spiderweb"] = Json{{"dim", net.base().dim()},        {"norm", std::string(to_string(net.base().kind()))},
                             {"a", p.a},                       {"b", p.b},
                             {"radius", net.radius()},         {"points", net.size()},
                             {"rule", file.rule == BranchRule::Flipped ? "flipped" : "standard"}};
  Json skipped = Json::array();
  if (checks.contains("axioms")) {
    const auto cert = check_retractional_axioms(family, cert_options(c));
    const double gate = c.max_k.value_or(gate_bound(p));
    const bool k_ok = cert.lipschitz.max <= gate + kBoundTolerance;
    report["certification"] = to_json(cert);
    report["family_constant"] = Json{{"measured", cert.lipschitz.max},
                                     {"gate", gate},
                                     {"formula_bound", spiderweb_family_bound(p)},
                                     {"pass", k_ok}};
    for (const auto& s : cert.skipped) skipped.push_back(s);
    pass = pass && cert.pass() && k_ok;
    per_level_csv(csv, family, cert);
  } else {
    skipped.push_back("axioms: not selected");
  }
  if (checks.contains("radial")) {
    const auto gap = radial_gap(net);
    const bool ok = gap.value <= 6.0 * p.b + kBoundTolerance;
    report["radial_gap"] = to_json(gap);
    report["radial_gap"]["bound"] = 6.0 * p.b;
    report["radial_gap"]["pass"] = ok;
    const auto comm = check_Psi_commutation(net);
    report["Psi_commutation"] = Json{{"pass", comm.pass}, {"n", comm.n}, {"m", comm.m}, {"point", comm.point}};
    pass = pass && ok && comm.pass;
  } else {
    skipped.push_back("radial: not selected");
  }
  if (checks.contains("naive")) {
    const double dev = psi_fast_vs_naive(net);
    const bool ok = dev <= 1e-12 * std::max(1, net.radius());
    report["psi_fast_vs_naive"] = Json{{"max_deviation", dev}, {"pass", ok}};
    pass = pass && ok;
  } else {
    skipped.push_back("naive: not selected");
  }
  if (checks.contains("freenorm")) {
    const std::size_t n = std::min(c.points, family.size());
    if (n >= 2) {
      const auto truncated = family.truncated(n);
      const auto est = basis_constant_estimate(truncated, c.samples, c.seed);
      const auto lip = family_lipschitz(truncated);
      bool contraction = true;
      for (std::size_t i = 0; i < n && !lip.per_index.empty(); ++i) {
        contraction = contraction && est.per_index[i] <= lip.per_index[i] + kBoundTolerance;
      }
      const bool ok = contraction && est.max_gap <= kDualityTolerance && est.value <= lip.max + kBoundTolerance;
      report["free_norm"] = to_json(est);
      report["free_norm"]["points"] = n;
      report["free_norm"]["measured_k"] = lip.max;
      report["free_norm"]["contraction"] = contraction;
      report["free_norm"]["pass"] = ok;
      pass = pass && ok;
    } else {
      skipped.push_back("freenorm: fewer than two points");
    }
  } else {
    skipped.push_back("freenorm: not selected");
  }
  report["skipped"] = skipped;
  report["pass"] = pass;
  return pass ? kExitOk : kExitCheckFailed;
}

int verify_net(const Config& c, const NetFile& file, Json& report, Csv& csv) {
  const auto& p = file.params;
  double radius = 0.0;
  for (const auto& x : file.points) radius = std::max(radius, x.norm());
  bool pass = true;
  const RegionSampler region{RegionKind::Ball, file.dim, file.norm, radius, c.grid_samples, c.seed};
  const auto net_report = validate_net(file.points, region, p);
  report["net"] = Json{{"points", file.points.size()},
                       {"a", p.a},
                       {"b", p.b},
                       {"min_pairwise_distance", net_report.min_pairwise_distance},
                       {"max_sample_distance", net_report.max_sample_to_net_distance},
                       {"separated", net_report.separated},
                       {"dense", net_report.dense}};
  pass = pass && net_report.separated;

  const double mesh = c.mesh > 0.0 ? c.mesh : default_mesh(file.dim);
  // A base point of norm r lands at 3br, which the net covers while 3br <= radius.
  const int base_radius =
      c.base_radius >= 0 ? c.base_radius : std::min(2, static_cast<int>(std::floor(radius / (3.0 * p.b) + 1e-9)));
  const auto base = build_base(file.dim, file.norm, 1.0, std::max(base_radius, 1), mesh);
  SpiderwebTransfer transfer;
  try {
    transfer = net_to_spiderweb(file.points, p, base, base_radius);
  } catch (const PreconditionError& e) {
    report["transfer"] = Json{{"base_radius", base_radius}, {"pass", false}, {"error", e.what()}};
    report["pass"] = false;
    return kExitCheckFailed;
  }
  const double distortion_bound = (2.0 * p.b / p.a + 1.0) * (4.0 * p.b / p.a + 1.0);
  const OrderedNet net(transfer.spiderweb);
  const auto moved = transport_basis(transfer.equivalence.inverse(), net.family());
  const auto cert = check_retractional_axioms(moved, cert_options(c));
  const double k_bound = distortion_bound * gate_bound(NetParams{1.0, 2.0});
  const bool distortion_ok = transfer.equivalence.distortion() <= distortion_bound + kBoundTolerance;
  const bool displacement_ok = transfer.max_displacement <= 1.0 / 3.0 + kBoundTolerance;
  const bool k_ok = cert.lipschitz.max <= k_bound + kBoundTolerance;
  report["transfer"] = Json{{"base_radius", base_radius},
                            {"scale", transfer.scale},
                            {"matched", transfer.matched},
                            {"spiderweb_points", net.size()},
                            {"distortion", transfer.equivalence.distortion()},
                            {"distortion_bound", distortion_bound},
                            {"max_displacement", transfer.max_displacement},
                            {"displacement_bound", 1.0 / 3.0},
                            {"pass", distortion_ok && displacement_ok}};
  report["transported_family"] = to_json(cert);
  report["transported_family"]["measured"] = cert.lipschitz.max;
  report["transported_family"]["gate"] = k_bound;
  report["transported_family"]["cross_check_bound"] = moved.theoretical_bound();
  per_level_csv(csv, moved, cert);
  pass = pass && distortion_ok && displacement_ok && k_ok && cert.pass();
  report["skipped"] = cert.skipped;
  report["pass"] = pass;
  return pass ? kExitOk : kExitCheckFailed;
}

int run_grid(const Config& c, std::shared_ptr<const GridSpace> space, const std::vector<GridPoint>* file_points,
             Json& report, Csv& csv);

int cmd_verify(const Config& c) {
  auto in = open_input(c.input);
  const auto kind = detect_file_kind(in);
  in.clear();
  in.seekg(0);
  auto report = base_report(c, "verify");
  Csv csv = level_csv();
  int code = kExitOk;
  if (kind == FileKind::Spiderweb) {
    report["input_kind"] = "spiderweb";
    code = verify_spiderweb(c, read_spiderweb(in), report, csv);
  } else if (kind == FileKind::Net) {
    report["input_kind"] = "net";
    code = verify_net(c, read_net(in), report, csv);
  } else {
    report["input_kind"] = "grid";
    const auto file = read_grid(in);
    Csv grid_csv({"s", "level_size", "F_lipschitz", "family_level_max"});
    code = run_grid(c, file.space, &file.points, report, grid_csv);
    write_outputs(c, report, grid_csv);
    return code;
  }
  write_outputs(c, report, csv);
  return code;
}

// ---------------------------------------------------------------------------------------------
// sweep

int cmd_sweep(const Config& c) {
  const auto p = params_of(c);
  if (!(p.a < 2.0)) throw UsageError("spiderweb separation --a must lie in (0, 2)");
  const auto kind = norm_of_config(c.norm);
  const double r = std::floor(c.radius);
  if (r != c.radius || r < 1 || r > 1024) throw UsageError("--radius must be an integer in 1..1024");
  std::vector<std::size_t> dims;
  for (const auto& t : split(c.sweep_dims)) {
    int d = 0;
    try {
      d = std::stoi(t);
    } catch (const std::exception&) {
      throw UsageError("bad dimension '" + t + "'");
    }
    if (d < 1 || d > 16) throw UsageError("sweep dimensions must lie in 1..16");
    dims.push_back(static_cast<std::size_t>(d));
  }
  if (dims.empty()) throw UsageError("--sweep-dims must name at least one dimension");

  auto report = base_report(c, "sweep");
  Csv csv({"dimension", "norm", "points", "measured_k", "bound", "formula_bound", "max_radial_gap", "radial_bound",
           "pass"});
  Json rows = Json::array();
  bool all = true;
  for (auto d : dims) {
    Json row{{"dimension", d}};
    try {
      const double mesh = c.mesh > 0.0 ? c.mesh : default_mesh(d);
      auto base = build_base(d, kind, p.a, static_cast<int>(r), mesh);
      const OrderedNet net(Spiderweb{base, {}, p, static_cast<int>(r)});
      const auto cert = check_retractional_axioms(net.family(), cert_options(c));
      const auto gap = radial_gap(net);
      const double gate = c.max_k.value_or(gate_bound(p));
      const bool ok = cert.pass() && cert.lipschitz.max <= gate + kBoundTolerance &&
                      gap.value <= 6.0 * p.b + kBoundTolerance;
      all = all && ok;
      row["points"] = net.size();
      row["measured_k"] = cert.lipschitz.max;
      row["bound"] = gate;
      row["max_radial_gap"] = gap.value;
      row["axioms_pass"] = cert.pass();
      row["skipped"] = cert.skipped;
      row["pass"] = ok;
      csv.row({cell(d), std::string(to_string(kind)), cell(net.size()), cell(cert.lipschitz.max), cell(gate),
               cell(spiderweb_family_bound(p)), cell(gap.value), cell(6.0 * p.b), cell(ok)});
    } catch (const ResourceError& e) {
      all = false;
      row["error"] = e.what();
      row["pass"] = false;
      csv.row({cell(d), std::string(to_string(kind)), "0", "nan", cell(gate_bound(p)), cell(spiderweb_family_bound(p)),
               "nan", cell(6.0 * p.b), cell(false)});
    }
    rows.push_back(row);
  }
  report["rows"] = rows;
  report["pass"] = all;
  write_outputs(c, report, csv);
  return all ? kExitOk : kExitCheckFailed;
}

// ---------------------------------------------------------------------------------------------
// basis-constant

int cmd_basis_constant(const Config& c) {
  auto in = open_input(c.input);
  const auto file = read_spiderweb(in);
  const OrderedNet net(file.web);
  const auto family = net.family(file.rule);
  const std::size_t n = std::min(c.points, family.size());
  if (n < 2) throw UsageError("--points must select at least two points");
  const auto truncated = family.truncated(n);
  const auto est = basis_constant_estimate(truncated, c.samples, c.seed);
  const auto lip = family_lipschitz(truncated);

  auto report = base_report(c, "basis-constant");
  Csv csv({"index", "estimate", "lipschitz"});
  bool contraction = true;
  for (std::size_t i = 0; i < n; ++i) {
    const double k = lip.per_index.empty() ? lip.max : lip.per_index[i];
    contraction = contraction && est.per_index[i] <= k + kBoundTolerance;
    csv.row({cell(i), cell(est.per_index[i]), cell(k)});
  }
  const bool ok = contraction && est.max_gap <= kDualityTolerance;
  report["free_norm"] = to_json(est);
  report["free_norm"]["points"] = n;
  report["measured_k"] = lip.max;
  report["contraction"] = contraction;
  report["pass"] = ok;
  write_outputs(c, report, csv);
  return ok ? kExitOk : kExitCheckFailed;
}

// ---------------------------------------------------------------------------------------------
// grid-verify

int run_grid(const Config& c, std::shared_ptr<const GridSpace> space, const std::vector<GridPoint>* file_points,
             Json& report, Csv& csv) {
  const GridNet net(space);
  if (file_points != nullptr) {
    std::set<GridPoint> given(file_points->begin(), file_points->end());
    std::set<GridPoint> expected(net.grid_points().begin(), net.grid_points().end());
    if (given != expected) throw ParseError("grid file is not the complete grid up to its cap");
  }
  const auto params = space->params();
  bool pass = true;
  Json q = Json::array();
  for (int k = 1; k <= space->q().size(); ++k) q.push_back(space->q()[k].str());
  report["grid"] = Json{{"blocks", space->block_count()},
                        {"ambient", std::string(to_string(space->ambient()))},
                        {"cap", space->norm_cap()},
                        {"a", params.a},
                        {"b", params.b},
                        {"points", net.size()},
                        {"s_max", net.s_max()},
                        {"q", q}};

  Json identities = Json::array();
  for (const auto& id : check_grid_identities(net)) {
    identities.push_back(
        Json{{"name", id.name}, {"pass", id.pass}, {"checked", id.checked}, {"point", id.point}, {"parameter", id.parameter}});
    pass = pass && id.pass;
  }
  report["identities"] = identities;

  const auto prox = grid_proximity(net);
  report["proximity"] = to_json(prox);
  const bool lambda_ok = prox.lambda_min >= -kBoundTolerance && prox.lambda_max <= 1.0 + kBoundTolerance &&
                         prox.lambda_residual <= 1e-9;
  report["proximity"]["lambda_pass"] = lambda_ok;
  report["proximity"]["semigroup_pass"] = prox.semigroup_deviation <= 1e-12;
  pass = pass && prox.sk_gap.pass && prox.s_gap.pass && prox.unit_step.pass && lambda_ok &&
         prox.semigroup_deviation <= 1e-12;

  const auto flip = measure_F_lipschitz(net);
  report["F_lipschitz"] = to_json(flip);
  report["F_lipschitz"]["stability_threshold"] = 1.5;
  report["F_lipschitz"]["stable"] = flip.spread <= 1.5;

  const auto family = net.family(flip.sup, rule_of(c.rule));
  const auto cert = check_retractional_axioms(family, cert_options(c));
  report["family"] = to_json(cert);
  report["family"]["measured"] = cert.lipschitz.max;
  report["family"]["bound"] = family.theoretical_bound();
  pass = pass && cert.pass();
  for (std::size_t s = 0; s <= net.s_max(); ++s) {
    csv.row({cell(s), cell(family.level_end(s) - family.level_begin(s)), cell(flip.per_s[s]),
             cell(cert.lipschitz.per_level[s])});
  }

  auto griddability = [&](AmbientNorm ambient) {
    std::vector<BlockSpec> specs;
    std::vector<std::vector<Vector>> nets;
    std::vector<NetParams> block_params;
    for (std::size_t i = 0; i < space->block_count(); ++i) {
      const auto& base = space->base(i);
      specs.push_back({base.dim(), base.kind()});
      std::vector<Vector> pts;
      for (const auto& bp : base.points(space->norm_cap())) pts.push_back(base.point(bp));
      nets.push_back(std::move(pts));
      block_params.push_back(base.params());
    }
    return check_griddability(BlockSpace(specs, ambient), nets, block_params, space->norm_cap(), c.grid_samples,
                              c.seed);
  };
  const auto grid_report = griddability(space->ambient());
  report["griddability"] = to_json(grid_report);
  pass = pass && (space->ambient() != AmbientNorm::SupSum || grid_report.pass());
  if (c.contrast) {
    const auto other = space->ambient() == AmbientNorm::SupSum ? AmbientNorm::L1Sum : AmbientNorm::SupSum;
    const auto contrast = griddability(other);
    report["griddability_contrast"] = to_json(contrast);
    report["griddability_contrast"]["ambient"] = std::string(to_string(other));
    // Against the same samples, the L1 assembly must cover strictly worse than SUP.
    const auto& sup = space->ambient() == AmbientNorm::SupSum ? grid_report : contrast;
    const auto& l1 = space->ambient() == AmbientNorm::SupSum ? contrast : grid_report;
    const bool worse = l1.max_sample_distance > sup.max_sample_distance;
    report["griddability_contrast"]["l1_strictly_worse"] = worse;
    pass = pass && worse;
  }
  report["skipped"] = cert.skipped;
  report["pass"] = pass;
  return pass ? kExitOk : kExitCheckFailed;
}

int cmd_grid_verify(const Config& c) {
  auto report = base_report(c, "grid-verify");
  Csv csv({"s", "level_size", "F_lipschitz", "family_level_max"});
  int code = kExitOk;
  if (!c.input.empty()) {
    auto in = open_input(c.input);
    const auto file = read_grid(in);
    code = run_grid(c, file.space, &file.points, report, csv);
  } else {
    const auto p = params_of(c);
    if (!(p.a < 2.0)) throw UsageError("grid separation --a must lie in (0, 2)");
    if (c.cap < 1 || c.cap > 64) throw UsageError("--cap must lie in 1..64");
    const auto specs = block_specs(c);
    double mesh = c.mesh;
    if (mesh <= 0.0) {
      mesh = 0.25;
      for (const auto& s : specs) mesh = std::max(mesh, default_mesh(s.dim));
    }
    auto space = std::make_shared<const GridSpace>(build_grid_space(specs, ambient_of(c.ambient), p.a, c.cap, mesh));
    code = run_grid(c, space, nullptr, report, csv);
  }
  write_outputs(c, report, csv);
  return code;
}

// ---------------------------------------------------------------------------------------------
// Argument handling

/// `--config file.json` expands into `--key value` pairs placed before the explicit flags,
/// so explicit flags win.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::vector<std::string> out;
  std::vector<std::string> from_config;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" || args[i].starts_with("--config=")) {
      std::string path;
      if (args[i] == "--config") {
        if (i + 1 >= args.size()) throw UsageError("--config needs a path");
        path = args[++i];
      } else {
        path = args[i].substr(9);
      }
      std::ifstream in(path);
      if (!in) throw UsageError("cannot open config '" + path + "'");
      Json j;
      try {
        j = Json::parse(in);
      } catch (const Json::exception& e) {
        throw UsageError("config '" + path + "' is not valid JSON: " + e.what());
      }
      if (!j.is_object()) throw UsageError("config must be a JSON object");
      for (const auto& [key, value] : j.items()) {
        if (value.is_boolean()) {
          if (value.get<bool>()) from_config.push_back("--" + key);
          continue;
        }
        from_config.push_back("--" + key);
        if (value.is_string()) {
          from_config.push_back(value.get<std::string>());
        } else if (value.is_array()) {
          std::string joined;
          for (const auto& v : value) joined += (joined.empty() ? "" : ",") + (v.is_string() ? v.get<std::string>() : v.dump());
          from_config.push_back(joined);
        } else {
          from_config.push_back(value.dump());
        }
      }
    } else {
      out.push_back(args[i]);
    }
  }
  // Insert right after the subcommand name.
  if (!out.empty()) out.insert(out.begin() + 1, from_config.begin(), from_config.end());
  return out;
}

void add_common(CLI::App* app, Config& c) {
  app->add_option("--seed", c.seed, "Random seed (recorded in every report)");
  app->add_option("--report", c.report, "JSON report path (default: standard output)");
  app->add_option("--csv", c.csv, "CSV table path");
  app->add_option("--mesh", c.mesh, "Candidate lattice spacing (0 = default for the dimension)");
}

void add_space(CLI::App* app, Config& c) {
  app->add_option("--dim", c.dim, "Dimension");
  app->add_option("--norm", c.norm, "L1, L2 or LINF");
  app->add_option("--a", c.a, "Separation a");
  app->add_option("--b", c.b, "Density radius b (0 = 2a)");
  app->add_option("--radius", c.radius, "Truncation radius");
}

void add_grid(CLI::App* app, Config& c) {
  app->add_option("--blocks", c.blocks, "Number of blocks");
  app->add_option("--dims", c.dims, "Block dimensions, comma separated");
  app->add_option("--norms", c.norms, "Block norms, comma separated");
  app->add_option("--ambient", c.ambient, "SUP or L1");
  app->add_option("--cap", c.cap, "Per-block integer norm cap");
}

void add_certify(CLI::App* app, Config& c) {
  app->add_option("--naive-budget", c.naive_budget, "Evaluation budget of the literal commutation check");
  app->add_option("--subsample", c.subsample, "Index pairs for the literal commutation check above its budget");
  app->add_option("--rule", c.rule, "standard or flipped branch rule");
}

}  // namespace

int run(int argc, char** argv) {
  Config c;
  CLI::App app{"Lipschitz retractions on nets: generation and certification"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("generate", "Write a net, spiderweb or grid file");
  gen->add_option("--kind", c.kind, "spiderweb, net or grid");
  add_space(gen, c);
  add_grid(gen, c);
  add_common(gen, c);
  gen->add_option("--rule", c.rule, "standard or flipped (spiderweb files)");
  gen->add_option("-o,--output", c.output, "Output path (default: standard output)");

  auto* verify = app.add_subcommand("verify", "Certify a net, spiderweb or grid file");
  verify->add_option("input", c.input, "Input file")->required();
  add_common(verify, c);
  add_certify(verify, c);
  verify->add_option("--checks", c.checks, "Comma list of axioms, radial, naive, freenorm, or all");
  verify->add_option("--samples", c.samples, "Free-norm molecule samples");
  verify->add_option("--points", c.points, "Free-norm truncation size");
  verify->add_option("--grid-samples", c.grid_samples, "Density samples");
  verify->add_option("--base-radius", c.base_radius, "Spiderweb radius for net transfers (default: largest covered, at most 2)");
  verify->add_option("--max-k", c.max_k, "Override the family constant gate");
  verify->add_flag("--contrast", c.contrast, "Also run griddability under the other ambient norm (grid files)");

  auto* sweep = app.add_subcommand("sweep", "Family constants across dimensions");
  add_space(sweep, c);
  add_common(sweep, c);
  add_certify(sweep, c);
  sweep->add_option("--sweep-dims", c.sweep_dims, "Comma separated dimensions");
  sweep->add_option("--max-k", c.max_k, "Override the family constant gate");

  auto* basis = app.add_subcommand("basis-constant", "Free-norm basis constant estimate");
  basis->add_option("input", c.input, "Spiderweb file")->required();
  add_common(basis, c);
  basis->add_option("--samples", c.samples, "Molecule samples");
  basis->add_option("--points", c.points, "Truncation size");

  auto* grid = app.add_subcommand("grid-verify", "Exact and proximity checks on a spiderweb grid");
  grid->add_option("input", c.input, "Grid file (optional; built from the options otherwise)");
  add_space(grid, c);
  add_grid(grid, c);
  add_common(grid, c);
  add_certify(grid, c);
  grid->add_option("--grid-samples", c.grid_samples, "Density samples");
  grid->add_flag("--contrast", c.contrast, "Also run griddability under the other ambient norm");

  try {
    std::vector<std::string> args(argv + 1, argv + argc);
    args = expand_config(args);
    std::vector<const char*> ptrs{argv[0]};
    for (const auto& a : args) ptrs.push_back(a.c_str());
    app.parse(static_cast<int>(ptrs.size()), ptrs.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (*gen) return cmd_generate(c);
    if (*verify) return cmd_verify(c);
    if (*sweep) return cmd_sweep(c);
    if (*basis) return cmd_basis_constant(c);
    if (*grid) return cmd_grid_verify(c);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const ResourceError& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return kExitBudget;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace lipnet::cli

int main(int argc, char** argv) { return lipnet::cli::run(argc, argv); }
