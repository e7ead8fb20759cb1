// Shared generators for the unit suites.
#pragma once

#include <algorithm>
#include <random>

#include "qfcs/generators.hpp"
#include "qfcs/vmodel.hpp"

namespace qfcs::testing {

inline VParams random_vparams(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  VParams p;
  p.nu = 0.5 + 1.5 * u(rng);
  p.delta = 0.6 * p.nu * u(rng);
  p.alpha = -1.5 + 3.0 * u(rng);
  p.a = 1e-3 + 0.05 * u(rng);
  p.t_left = 0.5 + 9.5 * u(rng);
  p.t_right = 0.5 + 9.5 * u(rng);
  return p;
}

/// Random N-level model with two baths and dense symmetric couplings.
/// With `degenerate`, levels 1 and 2 share an energy.
inline SystemModel random_system(std::mt19937_64& rng, std::size_t levels, bool degenerate = false) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> e(levels);
  for (auto& x : e) x = 2.0 * u(rng);
  std::sort(e.begin(), e.end());
  if (degenerate && levels >= 3) e[2] = e[1];
  SystemModel m{e, {}};
  for (const char* id : {"L", "R"}) {
    Eigen::MatrixXd s(static_cast<Eigen::Index>(levels), static_cast<Eigen::Index>(levels));
    for (Eigen::Index i = 0; i < s.rows(); ++i) {
      for (Eigen::Index j = 0; j <= i; ++j) s(i, j) = s(j, i) = 2.0 * u(rng) - 1.0;
    }
    m.couplings.push_back({id, s});
  }
  return m;
}

inline std::vector<BathSpec> random_baths(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return {BathSpec{"L", 0.5 + 5.0 * u(rng), 1e-3 + 0.03 * u(rng)},
          BathSpec{"R", 0.5 + 5.0 * u(rng), 1e-3 + 0.03 * u(rng)}};
}

inline OpenSystem random_open_system(std::mt19937_64& rng, std::size_t levels, double epsilon,
                                     bool degenerate = false) {
  auto model = validate_model(random_system(rng, levels, degenerate), random_baths(rng));
  auto partition = cluster_frequencies(model.system(), epsilon);
  return OpenSystem(std::move(model), std::move(partition));
}

inline double max_abs(const Eigen::MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); }

inline double relative_gap(const Eigen::MatrixXcd& x, const Eigen::MatrixXcd& y) {
  return max_abs(x - y) / std::max(max_abs(y), 1e-300);
}

}  // namespace qfcs::testing
