#include "qfcs/vmodel.hpp"

#include <cmath>

#include "qfcs/rates.hpp"

namespace qfcs {

void VParams::validate() const {
  if (!(nu > 0.0) || !std::isfinite(nu)) throw ModelError("nu must be positive");
  if (!(delta >= 0.0) || !(delta < nu)) throw ModelError("delta must satisfy 0 <= delta < nu");
  if (!std::isfinite(alpha)) throw ModelError("alpha must be finite");
  if (!(a > 0.0) || !std::isfinite(a)) throw ModelError("ohmic coefficient must be positive");
  if (!(t_left > 0.0) || !(t_right > 0.0) || !std::isfinite(t_left) || !std::isfinite(t_right)) {
    throw ModelError("non-positive temperature");
  }
}

namespace {

std::vector<BathSpec> v_baths(const VParams& p) {
  return {BathSpec{"L", p.t_left, p.a}, BathSpec{"R", p.t_right, p.a}};
}

SystemModel v_model(const VParams& p) {
  Eigen::MatrixXd s_left = Eigen::MatrixXd::Zero(3, 3);
  s_left(0, 1) = s_left(1, 0) = 1.0;
  s_left(0, 2) = s_left(2, 0) = 1.0;
  Eigen::MatrixXd s_right = Eigen::MatrixXd::Zero(3, 3);
  s_right(0, 1) = s_right(1, 0) = 1.0;
  s_right(0, 2) = s_right(2, 0) = p.alpha;
  return SystemModel{{0.0, p.nu - p.delta, p.nu}, {{"L", s_left}, {"R", s_right}}};
}

}  // namespace

ClusterPartition v_partition(const VParams& params) {
  params.validate();
  // Cluster indices: 0 -> -nu, 1 -> 0, 2 -> +nu.
  std::vector<std::size_t> assignment(9, 1);
  for (std::size_t e = 1; e < 3; ++e) {
    assignment[e * 3 + 0] = 2;
    assignment[0 * 3 + e] = 0;
  }
  return ClusterPartition(3, {0.0, params.nu - params.delta, params.nu}, std::move(assignment),
                          {-params.nu, 0.0, params.nu});
}

OpenSystem v_system(const VParams& params) {
  params.validate();
  auto model = validate_model(v_model(params), v_baths(params));
  return OpenSystem(std::move(model), v_partition(params), BasisOrdering(3, {{1, 2}, {2, 1}}));
}

Eigen::MatrixXcd closed_form_generator(const VParams& p, std::complex<double> chi_left,
                                       std::complex<double> chi_right) {
  p.validate();
  using C = std::complex<double>;
  const auto baths = v_baths(p);
  const double kl = golden_rule_rate(p.nu, baths[0]);
  const double ktl = golden_rule_rate(-p.nu, baths[0]);
  const double kr = golden_rule_rate(p.nu, baths[1]);
  const double ktr = golden_rule_rate(-p.nu, baths[1]);
  const C i(0.0, 1.0);
  const C down_l = std::exp(-i * chi_left * p.nu);
  const C up_l = std::exp(i * chi_left * p.nu);
  const C down_r = std::exp(-i * chi_right * p.nu);
  const C up_r = std::exp(i * chi_right * p.nu);
  const double al = p.alpha;
  const double al2 = al * al;
  const double cross = -0.5 * (kl + al * kr);
  const double coh = -kl - 0.5 * (al2 + 1.0) * kr;

  Eigen::MatrixXcd m(5, 5);
  m(0, 0) = -2.0 * ktl - (al2 + 1.0) * ktr;
  m(0, 1) = kl * down_l + kr * down_r;
  m(0, 2) = kl * down_l + al2 * kr * down_r;
  m(0, 3) = kl * down_l + al * kr * down_r;
  m(0, 4) = kl * down_l + al * kr * down_r;

  m(1, 0) = ktl * up_l + ktr * up_r;
  m(1, 1) = -kl - kr;
  m(1, 2) = 0.0;
  m(1, 3) = cross;
  m(1, 4) = cross;

  m(2, 0) = ktl * up_l + al2 * ktr * up_r;
  m(2, 1) = 0.0;
  m(2, 2) = -kl - al2 * kr;
  m(2, 3) = cross;
  m(2, 4) = cross;

  m(3, 0) = ktl * up_l + al * ktr * up_r;
  m(3, 1) = cross;
  m(3, 2) = cross;
  m(3, 3) = i * p.delta + coh;
  m(3, 4) = 0.0;

  m(4, 0) = ktl * up_l + al * ktr * up_r;
  m(4, 1) = cross;
  m(4, 2) = cross;
  m(4, 3) = 0.0;
  m(4, 4) = -i * p.delta + coh;
  return m;
}

SymmetryWitness closed_form_symmetry_witness(const VParams& params, std::complex<double> chi,
                                             double tolerance) {
  const std::complex<double> i(0.0, 1.0);
  const auto direct = closed_form_generator(params, chi, 0.0);
  const auto shifted =
      closed_form_generator(params, -chi - i / params.t_left, -i / params.t_right);
  const double scale = direct.cwiseAbs().maxCoeff();
  const double gap = (shifted.transpose() - direct).cwiseAbs().maxCoeff() / scale;
  return {gap <= tolerance, gap};
}

const std::vector<VPreset>& v_presets() {
  static const std::vector<VPreset> presets = [] {
    VParams base;
    base.nu = 1.0;
    base.alpha = 0.5;
    base.a = 0.01;
    base.t_left = 4.0;
    base.t_right = 3.99;
    std::vector<VPreset> out;
    auto add = [&](std::string name, double delta, double alpha, std::string summary) {
      VParams p = base;
      p.delta = delta;
      p.alpha = alpha;
      out.push_back({std::move(name), p, std::move(summary)});
    };
    add("fig2", 0.01, 0.5, "CGF symmetry scan, unified generator");
    add("fig4a", 0.03, 0.5, "linear-response transport, delta ~ gamma");
    add("fig4b", 0.3, 0.5, "linear-response transport, delta >> gamma");
    add("fig5", 0.03, -0.5, "mean current versus delta");
    add("fig6", 0.03, 0.5, "steady-state rho_23 over alpha and delta");
    add("fig7a", 0.03, -0.5, "TUR ratio versus deltaT, T_bar = 4");
    add("fig7b", 0.03, 0.5, "TUR ratio versus deltaT, T_bar = 4");
    return out;
  }();
  return presets;
}

const VPreset& find_preset(const std::string& name) {
  for (const auto& p : v_presets()) {
    if (p.name == name) return p;
  }
  throw ModelError("unknown preset '" + name + "'");
}

}  // namespace qfcs
