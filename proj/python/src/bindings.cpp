// SPDX-License-Identifier: Apache-2.0
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>
#include <string>
#include <vector>

#include "lipnet/freenorm.hpp"
#include "lipnet/grid_fdd.hpp"
#include "lipnet/lipcheck.hpp"
#include "lipnet/retract_fd.hpp"

namespace py = pybind11;
using namespace lipnet;

namespace {

double default_mesh(std::size_t dim) { return dim <= 2 ? 0.25 : 0.5; }

OrderedNet make_net(std::size_t dim, const std::string& norm, double a, int radius, double mesh) {
  if (radius < 1) throw PreconditionError("radius must be at least 1");
  const double m = mesh > 0.0 ? mesh : default_mesh(dim);
  auto base = std::make_shared<const SpiderwebBase>(
      build_spiderweb_base(dim, parse_norm_kind(norm), a, floor_log2(radius), m));
  return OrderedNet(Spiderweb{base, {}, NetParams{a, 2.0 * a}, radius});
}

BranchRule rule_of(const std::string& rule) {
  if (rule == "standard") return BranchRule::Standard;
  if (rule == "flipped") return BranchRule::Flipped;
  throw PreconditionError("rule must be 'standard' or 'flipped'");
}

py::dict cert_dict(const CertReport& cert) {
  py::dict axioms;
  for (const auto& a : cert.axioms) axioms[py::str(a.name)] = a.pass;
  py::dict out;
  out["pass"] = cert.pass();
  out["axioms"] = axioms;
  out["measured_k"] = cert.lipschitz.max;
  out["per_level"] = cert.lipschitz.per_level;
  out["skipped"] = cert.skipped;
  return out;
}

GridNet make_grid(int cap, const std::string& ambient, double mesh) {
  auto space = std::make_shared<const GridSpace>(build_grid_space(
      {{2, NormKind::LInf}, {2, NormKind::LInf}}, parse_ambient(ambient), 1.0, cap, mesh));
  return GridNet(space);
}

}  // namespace

PYBIND11_MODULE(_lipnet, m) {
  m.doc() = "Lipschitz retractions on nets: spiderweb and grid constructions with exact checks";

  py::register_exception<PreconditionError>(m, "PreconditionError", PyExc_ValueError);
  py::register_exception<ResourceError>(m, "ResourceError", PyExc_MemoryError);

  m.def("family_bound", [](double a, double b) { return spiderweb_family_bound(NetParams{a, b}); }, py::arg("a"),
        py::arg("b"), "(12b + 2) / a + 2.");

  m.def(
      "spiderweb_points",
      [](std::size_t dim, const std::string& norm, double a, int radius, double mesh) {
        const auto net = make_net(dim, norm, a, radius, mesh);
        std::vector<std::vector<double>> out;
        for (std::size_t i = 0; i < net.size(); ++i) {
          const auto c = net.points().coords(i);
          out.emplace_back(c.begin(), c.end());
        }
        return out;
      },
      py::arg("dim"), py::arg("norm") = "LINF", py::arg("a") = 1.0, py::arg("radius") = 4, py::arg("mesh") = 0.0,
      "Points of the truncated spiderweb in basis order.");

  m.def(
      "certify_spiderweb",
      [](std::size_t dim, const std::string& norm, double a, int radius, double mesh, const std::string& rule) {
        const auto net = make_net(dim, norm, a, radius, mesh);
        const auto family = net.family(rule_of(rule));
        CertReport cert;
        RadialGap gap;
        {
          py::gil_scoped_release release;
          cert = check_retractional_axioms(family);
          gap = radial_gap(net);
        }
        auto out = cert_dict(cert);
        out["radial_gap"] = gap.value;
        out["points"] = net.size();
        out["bound"] = spiderweb_family_bound(net.spiderweb().params);
        return out;
      },
      py::arg("dim"), py::arg("norm") = "LINF", py::arg("a") = 1.0, py::arg("radius") = 4, py::arg("mesh") = 0.0,
      py::arg("rule") = "standard", "Axioms, measured family constant and radial gap of a spiderweb family.");

  m.def(
      "free_norm",
      [](const std::vector<std::vector<double>>& distances, const std::vector<std::size_t>& support,
         const std::vector<double>& weights) {
        const auto r = free_norm(distances, Molecule{support, weights});
        py::dict out;
        out["value"] = r.value;
        out["dual"] = r.dual;
        out["gap"] = r.gap;
        std::vector<py::tuple> flows;
        for (const auto& f : r.plan.flows) flows.push_back(py::make_tuple(f.source, f.sink, f.mass));
        out["flows"] = flows;
        return out;
      },
      py::arg("distances"), py::arg("support"), py::arg("weights"),
      "Minimal transport cost of a zero-mass molecule over a distance matrix.");

  m.def(
      "basis_constant",
      [](std::size_t dim, const std::string& norm, double a, int radius, std::size_t points, std::size_t samples,
         std::uint64_t seed) {
        const auto net = make_net(dim, norm, a, radius, 0.0);
        const auto family = net.family().truncated(std::min(points, net.size()));
        const auto est = basis_constant_estimate(family, samples, seed);
        py::dict out;
        out["value"] = est.value;
        out["index"] = est.index;
        out["max_gap"] = est.max_gap;
        out["measured_k"] = family_lipschitz(family).max;
        return out;
      },
      py::arg("dim"), py::arg("norm") = "LINF", py::arg("a") = 1.0, py::arg("radius") = 8, py::arg("points") = 40,
      py::arg("samples") = 500, py::arg("seed") = 1, "Seeded free-norm estimate of the basis constant.");

  m.def(
      "q_sequence",
      [](int k) {
        const QSeq q(k);
        std::vector<py::int_> out;
        for (int i = 1; i <= k; ++i) out.push_back(py::int_(py::str(q[i].str())));
        return out;
      },
      py::arg("k"), "q_1, ..., q_k as Python integers.");

  m.def(
      "grid_identities",
      [](int cap, const std::string& ambient, double mesh) {
        const auto net = make_grid(cap, ambient, mesh);
        std::vector<std::pair<std::string, bool>> out;
        for (const auto& id : check_grid_identities(net)) out.emplace_back(id.name, id.pass);
        return out;
      },
      py::arg("cap") = 2, py::arg("ambient") = "SUP", py::arg("mesh") = 0.25,
      "Exact identity checks on the two-block planar grid with the given norm cap.");

  m.def(
      "grid_sk_sequence",
      [](int norm1, int norm2) {
        const auto space = build_grid_space({{2, NormKind::LInf}, {2, NormKind::LInf}}, AmbientNorm::SupSum, 1.0,
                                            std::max({norm1, norm2, 1}), 0.25);
        const GridPoint x{{BasePoint{norm1, 0}, BasePoint{norm2, 0}}};
        std::vector<py::int_> out;
        for (const auto& s : sk_sequence(space, x)) out.push_back(py::int_(py::str(s.str())));
        return out;
      },
      py::arg("norm1"), py::arg("norm2"), "s_k sequence of a two-block grid point with the given block norms.");
}
