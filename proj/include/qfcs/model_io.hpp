// model_io.hpp: open-system description from a JSON document.
//
// {
//   "levels":   {"energies": [0.0, 0.97, 1.0]},
//   "couplings": [{"bath": "L", "matrix": [[0,1,1],[1,0,0],[1,0,0]]}],
//   "baths":    [{"id": "L", "temperature": 4.0, "ohmic_a": 0.01}],
//   "clustering": {"epsilon": 0.1, "centers": [1.0]}      (optional)
// }
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qfcs/generators.hpp"

namespace qfcs {

struct ModelConfig {
  SystemModel system;
  std::vector<BathSpec> baths;
  std::optional<double> epsilon;
  std::optional<std::vector<double>> centers;
};

/// Parses and checks the document shape. Throws ModelError on missing keys,
/// wrong types or non-real matrix entries.
ModelConfig parse_model_config(const std::string& json_text);
ModelConfig read_model_config(const std::string& path);

/// Validated system with its partition (centers override, else epsilon,
/// else default_epsilon) and reduced basis.
OpenSystem build_open_system(const ModelConfig& config);

}  // namespace qfcs
