#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <random>

#include "commands.hpp"
#include "qfcs/fcs.hpp"
#include "qfcs/rates.hpp"
#include "qfcs/vmodel.hpp"

namespace qfcs::cli {

namespace {

struct Check {
  std::string name;
  double measured = 0.0;
  double bound = 0.0;
  bool pass = false;
};

VParams random_params(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  VParams p;
  p.nu = 0.5 + 1.5 * u(rng);
  p.delta = 0.5 * p.nu * u(rng);
  p.alpha = -1.5 + 3.0 * u(rng);
  p.a = 1e-3 + 0.05 * u(rng);
  p.t_left = 0.5 + 9.5 * u(rng);
  p.t_right = 0.5 + 9.5 * u(rng);
  return p;
}

double relative_gap(const Eigen::MatrixXcd& x, const Eigen::MatrixXcd& y) {
  return (x - y).cwiseAbs().maxCoeff() / std::max(y.cwiseAbs().maxCoeff(), 1e-300);
}

}  // namespace

int run_selftest(bool quick, bool fault, const Tolerances& tol, std::ostream& out) {
  const auto started = std::chrono::steady_clock::now();
  const int draws = quick ? 10 : 100;
  std::vector<Check> checks;
  auto record = [&](std::string name, double measured, double bound) {
    checks.push_back({std::move(name), measured, bound, measured <= bound});
  };

  {
    std::mt19937_64 rng(20240601);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    double worst = 0.0;
    for (int k = 0; k < draws; ++k) {
      const auto p = random_params(rng);
      const auto system = v_system(p);
      const CountingField chi{u(rng), u(rng)};
      for (Method m : {Method::kUnified, Method::kSecular}) {
        const auto direct = build_generator(system, m, chi).matrix;
        const auto shifted = build_generator(system, m, shifted_field(system.model, chi)).matrix;
        worst = std::max(worst, relative_gap(shifted.transpose(), direct));
      }
    }
    record("generator symmetry (unified, secular)", worst, tol["generator"]);
  }

  {
    std::mt19937_64 rng(20240602);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    double worst = 0.0;
    for (int k = 0; k < draws; ++k) {
      const auto p = random_params(rng);
      const std::complex<double> chi(u(rng), 0.2 * u(rng));
      Eigen::MatrixXcd oracle = closed_form_generator(p, chi);
      if (fault) oracle(1, 0) = -oracle(1, 0);
      const auto built = build_generator(v_system(p), Method::kUnified, {chi, 0.0}).matrix;
      worst = std::max(worst, relative_gap(built, oracle));
    }
    record("closed-form oracle equality", worst, tol["oracle"]);
  }

  {
    std::mt19937_64 rng(20240603);
    double worst = 0.0;
    for (int k = 0; k < draws; ++k) {
      const auto system = v_system(random_params(rng));
      for (Method m : kAllMethods) {
        const auto l = build_generator(system, m, zero_field(system.model)).matrix;
        worst = std::max(worst, (system.basis.trace_functional() * l).norm() / l.norm());
      }
    }
    record("trace preservation (all methods)", worst, tol["trace"]);
  }

  {
    std::mt19937_64 rng(20240604);
    double worst = 0.0;
    for (int k = 0; k < draws; ++k) {
      const auto system = v_system(random_params(rng));
      worst = std::max(worst, RateTable::for_partition(system.model.baths(), system.partition)
                                  .detailed_balance_residual());
    }
    record("local detailed balance", worst, tol["detailed_balance"]);
  }

  {
    std::mt19937_64 rng(20240605);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    double worst_matrix = 0.0;
    double worst_cgf = 0.0;
    for (int k = 0; k < draws; ++k) {
      const auto p = random_params(rng);
      const auto system = v_system(p);
      const double c = u(rng);
      for (Method m : {Method::kUnified, Method::kSecular}) {
        // Phase per basis entry from the upper level's energy: the cluster
        // center for unified, the exact level for secular.
        Eigen::VectorXcd d(5);
        for (std::size_t j = 0; j < 5; ++j) {
          const std::size_t level = system.basis[j].a;
          const double e = level == 0 ? 0.0
                           : m == Method::kUnified ? p.nu
                                                   : system.model.system().energies[level];
          d(static_cast<Eigen::Index>(j)) = std::exp(std::complex<double>(0.0, c * e));
        }
        const auto l0 = build_generator(system, m, zero_field(system.model)).matrix;
        const auto gauged = build_generator(system, m, {c, c});
        const Eigen::MatrixXcd similar = d.asDiagonal() * l0 * d.cwiseInverse().asDiagonal();
        worst_matrix = std::max(worst_matrix, relative_gap(gauged.matrix, similar));
        worst_cgf = std::max(worst_cgf, std::abs(cgf_point(gauged).value) / l0.norm());
      }
    }
    record("gauge invariance L(chi, chi)", worst_matrix, tol["gauge"]);
    record("gauge invariance G(chi, chi) = 0", worst_cgf, tol["gauge"]);
  }

  {
    const auto system = v_system(find_preset("fig2").params);
    const auto l0 = build_generator(system, Method::kUnified, zero_field(system.model)).matrix;
    const double t = 50.0 / spectral_gap(l0);
    const auto g = build_generator(system, Method::kUnified, {0.5, 0.0});
    const auto rho0 = maximally_mixed(system.basis);
    const auto lambda = cgf_point(g).value;
    const double e1 = std::abs(lambda - std::log(mgf(g, rho0, t)) / t);
    const double e2 = std::abs(lambda - std::log(mgf(g, rho0, 2.0 * t)) / (2.0 * t));
    record("long-time CGF oracle: error halves as t doubles", std::abs(e1 / e2 / 2.0 - 1.0),
           tol["long_time_decay"]);
  }

  if (!quick) {
    double worst = 0.0;
    for (double delta : {0.01, 0.03, 0.1, 0.3, 0.9}) {
      VParams p = find_preset("fig2").params;
      p.delta = delta;
      const auto system = v_system(p);
      const auto grid = periodic_chi_grid(system.model, 200);
      for (Method m : {Method::kUnified, Method::kSecular}) {
        worst = std::max(worst, fluctuation_symmetry_scan(system, m, grid).max_residual);
      }
    }
    record("CGF fluctuation symmetry (unified, secular)", worst, tol["symmetry"]);

    VParams p = find_preset("fig2").params;
    p.delta = 0.0;
    const auto system = v_system(p);
    const CountingField chi{0.8, -0.3};
    record("delta = 0: unified equals redfield",
           relative_gap(build_generator(system, Method::kRedfield, chi).matrix,
                        build_generator(system, Method::kUnified, chi).matrix),
           tol["generator"]);
  }

  bool all = true;
  out << std::left << std::setw(52) << "check" << std::setw(7) << "result" << std::setw(14)
      << "measured"
      << "bound\n";
  for (const auto& c : checks) {
    all = all && c.pass;
    out << std::setw(52) << c.name << std::setw(7) << (c.pass ? "PASS" : "FAIL") << std::setw(14)
        << std::setprecision(3) << std::scientific << c.measured << c.bound << '\n';
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  out << std::defaultfloat << std::setprecision(3) << (all ? "all checks passed" : "FAILURES")
      << " in " << seconds << " s\n";
  return all ? kOk : kSelftestFailed;
}

}  // namespace qfcs::cli
