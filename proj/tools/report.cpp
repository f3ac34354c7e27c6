// SPDX-License-Identifier: Apache-2.0
#include "report.hpp"

#include "lipnet/io.hpp"

namespace lipnet::cli {

Json to_json(const Witness& w) {
  return Json{{"index", w.index}, {"first", w.first}, {"second", w.second}, {"value", w.value}};
}

Json to_json(const AxiomCheck& a) {
  Json j{{"name", a.name}, {"pass", a.pass}, {"detail", a.detail}};
  j["witness"] = a.witness ? to_json(*a.witness) : Json(nullptr);
  return j;
}

Json to_json(const BoundEntry& b) {
  return Json{{"name", b.name},   {"measured", b.measured},   {"theoretical", b.theoretical},
              {"pass", b.pass},   {"point", b.point},         {"parameter", b.parameter}};
}

Json to_json(const CertReport& r) {
  Json j{{"pass", r.pass()}, {"points", r.point_count}, {"levels", r.level_count}};
  j["axioms"] = Json::array();
  for (const auto& a : r.axioms) j["axioms"].push_back(to_json(a));
  j["bounds"] = Json::array();
  for (const auto& b : r.bounds) j["bounds"].push_back(to_json(b));
  j["lipschitz"] = Json{{"max", r.lipschitz.max},
                        {"witness", to_json(r.lipschitz.witness)},
                        {"pairs_evaluated", r.lipschitz.pairs_evaluated},
                        {"pruned", r.lipschitz.pruned},
                        {"per_index_available", !r.lipschitz.per_index.empty()}};
  j["skipped"] = r.skipped;
  return j;
}

Json to_json(const RadialGap& g) { return Json{{"value", g.value}, {"point", g.point}, {"n", g.n}}; }

Json to_json(const BasisConstantEstimate& e) {
  Json j{{"value", e.value}, {"index", e.index}, {"samples", e.samples}, {"seed", e.seed}, {"max_duality_gap", e.max_gap}};
  j["witness"] = Json{{"support", e.witness.support}, {"weights", e.witness.weights}};
  return j;
}

Json to_json(const GridProximity& p) {
  return Json{{"sk_gap", to_json(p.sk_gap)},
              {"s_gap", to_json(p.s_gap)},
              {"unit_step", to_json(p.unit_step)},
              {"semigroup_deviation", p.semigroup_deviation},
              {"lambda_min", p.lambda_min},
              {"lambda_max", p.lambda_max},
              {"lambda_residual", p.lambda_residual},
              {"lambda_instances", p.lambda_instances}};
}

Json to_json(const FLipschitz& f) {
  return Json{{"sup", f.sup}, {"min", f.min_positive}, {"spread", f.spread}, {"per_s", f.per_s}};
}

Json to_json(const GriddabilityReport& g) {
  return Json{{"pass", g.pass()},
              {"min_pairwise_distance", g.min_pairwise_distance},
              {"separation_target", g.separation_target},
              {"separated", g.separated},
              {"max_sample_distance", g.max_sample_distance},
              {"density_target", g.density_target},
              {"dense", g.dense},
              {"grid_points", g.grid_points},
              {"samples", g.samples}};
}

void Csv::row(std::vector<std::string> cells) {
  if (cells.size() != header_.size()) throw PreconditionError("CSV row width differs from the header");
  rows_.push_back(std::move(cells));
}

void Csv::write(std::ostream& out) const {
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
    out << "\n";
  };
  line(header_);
  for (const auto& r : rows_) line(r);
}

std::string cell(double v) { return format_double(v); }
std::string cell(std::size_t v) { return std::to_string(v); }
std::string cell(bool v) { return v ? "true" : "false"; }

}  // namespace lipnet::cli
