// fcs.hpp: current cumulants, fluctuation-symmetry residuals, linear-response
// transport relations, TUR ratio and the V-model sweep drivers.
//
// Currents count energy leaving a bath: s = i chi, <J^n>_c = d^n G / ds^n at 0.
// Two-bath drivers treat bath 0 as L (counted) and bath 1 as R, with
// delta_beta = beta_R - beta_L.
#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "qfcs/generators.hpp"
#include "qfcs/spectral.hpp"
#include "qfcs/vmodel.hpp"

namespace qfcs {

struct CumulantSet {
  double mean = 0.0;
  double variance = 0.0;
  std::optional<double> third;
  double step = 0.0;
  int richardson_steps = 1;
  /// Mean from w . dL/ds . rho_ss, independent of the differences above.
  double mean_from_generator = 0.0;
  /// Branch tracking through the stencil reported ambiguity or a crossing.
  bool branch_warning = false;
};

/// 1e-3 / max |Bohr frequency|.
double default_chi_step(const CheckedModel& model);

/// Central differences of G(s) with one Richardson step. order is 1..3;
/// h <= 0 selects default_chi_step.
CumulantSet cumulants(const OpenSystem& system, Method method, std::size_t bath,
                      int order = 2, double h = 0.0);

/// First two cumulants from steady-state perturbation theory:
/// J = w L1 rho, S = w L2 rho - 2 w L1 R Q L1 rho with R the Drazin inverse.
struct CurrentStatistics {
  double mean = 0.0;
  double variance = 0.0;
};
CurrentStatistics current_statistics(const OpenSystem& system, Method method, std::size_t bath);

struct SymmetryPoint {
  double chi = 0.0;
  std::complex<double> g;
  std::complex<double> g_shifted;
  double re_residual = 0.0;
  double im_residual = 0.0;
  double residual = 0.0;
  double spectrum_distance = 0.0;
  bool ambiguous = false;
  bool crossing = false;
};

struct SymmetryReport {
  Method method = Method::kUnified;
  std::vector<SymmetryPoint> points;
  double max_residual = 0.0;
  double max_re_residual = 0.0;
  double max_im_residual = 0.0;
  double max_spectrum_distance = 0.0;
};

/// G(chi) against G(-chi - i beta) along a real grid starting at 0, counting
/// on `bath` only. Both sides are tracked from their first grid point.
SymmetryReport fluctuation_symmetry_scan(const OpenSystem& system, Method method,
                                         const std::vector<double>& chi_grid,
                                         std::size_t bath = 0, std::size_t jobs = 1);

/// Uniform grid of n points on [0, 2 pi / omega_max].
std::vector<double> periodic_chi_grid(const CheckedModel& model, std::size_t n);

struct RelationCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  double relative_gap = 0.0;
};

/// Copy of a two-bath system at beta_{L,R} = beta_bar -+ delta_beta / 2.
OpenSystem at_inverse_temperatures(const OpenSystem& system, double beta_bar,
                                   double delta_beta);

/// dJ/d(delta_beta) against S/2 at equilibrium temperature t_bar.
/// h_beta <= 0 selects 1e-4 beta_bar.
RelationCheck green_kubo_check(const OpenSystem& system, Method method, double t_bar,
                               double h_beta = 0.0);

/// d^2 J/d(delta_beta)^2 against dS/d(delta_beta) by five-point stencils.
/// h_beta <= 0 selects 1e-2 beta_bar.
RelationCheck second_order_check(const OpenSystem& system, Method method, double t_bar,
                                 double h_beta = 0.0);

struct TurPoint {
  double delta_t = 0.0;
  double mean = 0.0;
  double variance = 0.0;
  double ratio = 0.0;
};

struct TurScan {
  Method method = Method::kUnified;
  std::vector<TurPoint> points;  // delta_t > 0 only, grid order
  /// Quadratic extrapolation to delta_t -> 0 through the three smallest
  /// points; empty with fewer than three.
  std::optional<double> limit;
};

/// T_{L,R} = t_bar +- delta_t / 2; ratio = delta_beta * S / J.
TurScan tur_scan(const OpenSystem& system, Method method, double t_bar,
                 const std::vector<double>& delta_t_grid, std::size_t jobs = 1);

enum class Closeness { kUnified, kSecular, kCrossover };
std::string_view to_string(Closeness c);

/// A method matches Redfield when |J_A - J_red| <= threshold |J_sec - J_uni|.
Closeness classify_closeness(double j_redfield, double j_unified, double j_secular,
                             double threshold = 0.1);

struct CrossoverRow {
  double delta = 0.0;
  double j_redfield = 0.0;
  double j_unified = 0.0;
  double j_secular = 0.0;
  Closeness closest = Closeness::kCrossover;
};

std::vector<CrossoverRow> crossover_scan(const VParams& base, const std::vector<double>& deltas,
                                         std::size_t jobs = 1);

struct CoherenceRow {
  double alpha = 0.0;
  double delta = 0.0;
  Method method = Method::kUnified;
  std::complex<double> rho23;
};

/// Steady-state rho_23 over the alpha x delta grid (alpha-major). Secular
/// is rejected: its coherences vanish identically.
std::vector<CoherenceRow> coherence_map(const VParams& base, const std::vector<double>& alphas,
                                        const std::vector<double>& deltas,
                                        const std::vector<Method>& methods, std::size_t jobs = 1);

/// delta_beta * <J> for a two-bath model.
double entropy_production(const CheckedModel& model, double mean_current);

}  // namespace qfcs
