// vmodel.hpp: three-level V system between two Ohmic baths, its closed-form
// tilted generator, and named parameter presets.
//
// Levels |1> (E = 0), |2> (E = nu - delta), |3> (E = nu). Bath L couples
// through |1><2| + |1><3| + h.c., bath R through |1><2| + alpha |1><3| + h.c.
#pragma once

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qfcs/generators.hpp"

namespace qfcs {

struct VParams {
  double nu = 1.0;
  double delta = 0.03;
  double alpha = 0.5;
  double a = 0.01;
  double t_left = 4.0;
  double t_right = 3.99;

  /// Throws ModelError unless 0 <= delta < nu, a > 0 and both temperatures
  /// are positive.
  void validate() const;
  double t_bar() const { return 0.5 * (t_left + t_right); }
};

/// Bath order is (L, R). Clusters are {-nu, 0, +nu} by level manifold with
/// centers pinned at +-nu; basis (11, 22, 33, 23, 32).
OpenSystem v_system(const VParams& params);

/// Level-manifold partition: ground <-> excited pairs at +-nu, everything
/// else in the zero cluster.
ClusterPartition v_partition(const VParams& params);

/// Hand-written 5x5 generator on (11, 22, 33, 23, 32) with
/// k_j = gamma_j(nu), k~_j = gamma_j(-nu).
Eigen::MatrixXcd closed_form_generator(const VParams& params, std::complex<double> chi_left,
                                       std::complex<double> chi_right = 0.0);

struct SymmetryWitness {
  bool holds = false;
  double relative_gap = 0.0;
};

/// Compares transpose(L(-chi - i beta_L, -i beta_R)) with L(chi, 0) on the
/// closed form.
SymmetryWitness closed_form_symmetry_witness(const VParams& params, std::complex<double> chi,
                                             double tolerance = 1e-14);

struct VPreset {
  std::string name;
  VParams params;
  std::string summary;
};

const std::vector<VPreset>& v_presets();
/// Throws ModelError for unknown names.
const VPreset& find_preset(const std::string& name);

}  // namespace qfcs
