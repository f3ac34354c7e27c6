// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "json.hpp"
#include <ostream>
#include <string>
#include <vector>

#include "lipnet/freenorm.hpp"
#include "lipnet/grid_fdd.hpp"
#include "lipnet/lipcheck.hpp"
#include "lipnet/retract_fd.hpp"

namespace lipnet::cli {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

Json to_json(const Witness& w);
Json to_json(const AxiomCheck& a);
Json to_json(const BoundEntry& b);
/// Per-level data goes to CSV; the JSON keeps the maxima, witnesses and skips.
Json to_json(const CertReport& r);
Json to_json(const RadialGap& g);
Json to_json(const BasisConstantEstimate& e);
Json to_json(const GridProximity& p);
Json to_json(const FLipschitz& f);
Json to_json(const GriddabilityReport& g);

/// Minimal CSV writer: header once, rows of preformatted cells.
class Csv {
 public:
  explicit Csv(std::vector<std::string> header) : header_(std::move(header)) {}
  void row(std::vector<std::string> cells);
  void write(std::ostream& out) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

std::string cell(double v);
std::string cell(std::size_t v);
std::string cell(bool v);

}  // namespace lipnet::cli
