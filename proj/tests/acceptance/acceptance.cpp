// Acceptance suite: one PASS/FAIL line per criterion clause, exit status 1 if
// any clause fails. Tolerances are fixed here.

#include <algorithm>
#include <cmath>
#include <complex>
#include <iterator>
#include <cstdio>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "qfcs/fcs.hpp"
#include "qfcs/rates.hpp"
#include "qfcs/spectral.hpp"
#include "qfcs/vmodel.hpp"

using namespace qfcs;
using cd = std::complex<double>;

namespace {

constexpr double kPi = std::numbers::pi;

class Ledger {
 public:
  void check(const std::string& id, const std::string& what, bool ok, const std::string& detail) {
    std::printf("%s %-4s %s: %s\n", ok ? "PASS" : "FAIL", id.c_str(), what.c_str(), detail.c_str());
    (ok ? passed_ : failed_)++;
  }
  void info(const std::string& id, const std::string& detail) {
    std::printf("INFO %-4s %s\n", id.c_str(), detail.c_str());
  }
  int finish() const {
    std::printf("\n%d passed, %d failed\n", passed_, failed_);
    return failed_ == 0 ? 0 : 1;
  }

 private:
  int passed_ = 0;
  int failed_ = 0;
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string fmt(const char* f, double a, double b) {
  char buf[192];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

std::string fmt(const char* f, double a, double b, double c) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

double max_abs(const Eigen::MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); }

double rel_gap(const Eigen::MatrixXcd& x, const Eigen::MatrixXcd& y) {
  return max_abs(x - y) / max_abs(y);
}

VParams random_params(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  VParams p;
  p.nu = 0.5 + 1.5 * u(rng);
  p.delta = 0.9 * p.nu * u(rng);
  p.alpha = -1.0 + 2.0 * u(rng);
  p.a = 1e-3 + 0.05 * u(rng);
  p.t_left = 0.5 + 9.5 * u(rng);
  p.t_right = 0.5 + 9.5 * u(rng);
  return p;
}

cd random_chi(std::mt19937_64& rng, double nu) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  return {2.0 * kPi / nu * u(rng), 0.5 / nu * u(rng)};
}

VParams preset(const char* name, double delta) {
  VParams p = find_preset(name).params;
  p.delta = delta;
  return p;
}

Eigen::MatrixXcd transposed_shift_gap(const OpenSystem& s, Method m, const CountingField& chi) {
  const auto direct = build_generator(s, m, chi).matrix;
  const auto shifted = build_generator(s, m, shifted_field(s.model, chi)).matrix;
  return shifted.transpose() - direct;
}

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> g;
  for (int k = 0; k < n; ++k) g.push_back(lo * std::pow(hi / lo, k / double(n - 1)));
  return g;
}

std::vector<double> alpha_grid(int n) {
  std::vector<double> g;
  for (int k = 0; k < n; ++k) g.push_back(-1.0 + 2.0 * k / double(n - 1));
  return g;
}

// 1. Closed-form oracle.
void generator_oracle(Ledger& out) {
  std::mt19937_64 rng(101);
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const auto p = random_params(rng);
    const cd chi_l = random_chi(rng, p.nu);
    const cd chi_r = random_chi(rng, p.nu);
    const auto s = v_system(p);
    const auto built = build_unified(s.model, s.partition, {chi_l, chi_r}, s.basis).matrix;
    worst = std::max(worst, rel_gap(built, closed_form_generator(p, chi_l, chi_r)));
  }
  out.check("1", "unified builder vs closed form, 100 draws", worst <= 1e-14,
            fmt("max relative gap %.3e (tol 1e-14)", worst));
}

// 2. and 3. Fluctuation symmetry scans.
void symmetry_scans(Ledger& out) {
  const std::vector<double> deltas{0.01, 0.03, 0.1, 0.3, 0.9};
  for (Method m : {Method::kUnified, Method::kSecular}) {
    double worst = 0.0;
    for (double d : deltas) {
      const auto s = v_system(preset("fig2", d));
      const auto r = fluctuation_symmetry_scan(s, m, periodic_chi_grid(s.model, 200), 0, 0);
      worst = std::max(worst, r.max_residual);
    }
    out.check("2", std::string("fluctuation symmetry, ") + std::string(to_string(m)),
              worst <= 1e-9, fmt("max |G(chi) - G(-chi - i beta)| = %.3e (tol 1e-9)", worst));
  }

  const auto s = v_system(preset("fig2", 0.3));
  const auto grid = periodic_chi_grid(s.model, 200);
  const auto red = fluctuation_symmetry_scan(s, Method::kRedfield, grid, 0, 0);
  const auto uni = fluctuation_symmetry_scan(s, Method::kUnified, grid, 0, 0);
  out.check("3a", "Redfield Im residual >= 1e3 x unified residual",
            red.max_im_residual >= 1e3 * uni.max_residual,
            fmt("Redfield max Im residual %.3e, unified max residual %.3e, ratio %.3e",
                red.max_im_residual, uni.max_residual,
                red.max_im_residual / uni.max_residual));

  const double nu = find_preset("fig2").params.nu;
  bool monotone = true;
  double first_drop = std::numeric_limits<double>::quiet_NaN();
  double peak = 0.0;
  double peak_at = 0.0;
  for (std::size_t k = 0; k < red.points.size(); ++k) {
    const auto& pt = red.points[k];
    if (pt.im_residual > peak) {
      peak = pt.im_residual;
      peak_at = pt.chi * nu;
    }
    if (k == 0 || pt.chi * nu > kPi + 1e-12) continue;
    if (pt.im_residual < red.points[k - 1].im_residual && monotone) {
      monotone = false;
      first_drop = pt.chi * nu;
    }
  }
  out.check("3b", "Redfield Im residual nondecreasing on chi nu in [0, pi]", monotone,
            monotone ? std::string("nondecreasing")
                     : fmt("first decrease at chi nu = %.4f; peak %.3e at chi nu = %.4f",
                           first_drop, peak, peak_at));
  out.check("3c", "Redfield Re residual within 10x unified residual",
            red.max_re_residual <= 10.0 * uni.max_residual,
            fmt("Redfield max Re residual %.3e, 10 x unified = %.3e", red.max_re_residual,
                10.0 * uni.max_residual));
}

// 4. Matrix identity.
void matrix_identity(Ledger& out) {
  std::mt19937_64 rng(202);
  for (Method m : {Method::kUnified, Method::kSecular}) {
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
      const auto p = random_params(rng);
      const auto s = v_system(p);
      const CountingField chi{random_chi(rng, p.nu), random_chi(rng, p.nu)};
      worst = std::max(worst, max_abs(transposed_shift_gap(s, m, chi)) /
                                  max_abs(build_generator(s, m, chi).matrix));
    }
    out.check("4", std::string("transpose(L(-chi - i beta)) = L(chi), ") + std::string(to_string(m)),
              worst <= 1e-12, fmt("max relative gap %.3e (tol 1e-12)", worst));
  }
  const auto s = v_system(preset("fig2", 0.3));
  double worst = 0.0;
  double at = 0.0;
  for (double chi : periodic_chi_grid(s.model, 200)) {
    const CountingField field{chi, 0.0};
    const double g = max_abs(transposed_shift_gap(s, Method::kRedfield, field)) /
                     max_abs(build_generator(s, Method::kRedfield, field).matrix);
    if (g > worst) {
      worst = g;
      at = chi;
    }
  }
  out.check("4", "Redfield at delta = 0.3 violates the identity", worst >= 1e-3,
            fmt("max gap / max|L| = %.3e at chi = %.4f (need >= 1e-3)", worst, at));
}

// 5. Long-time limit of ln Z / t.
void long_time(Ledger& out) {
  const auto s = v_system(find_preset("fig2").params);
  const auto l0 = build_generator(s, Method::kUnified, zero_field(s.model)).matrix;
  const double t = 50.0 / spectral_gap(l0);
  const auto rho0 = maximally_mixed(s.basis);
  std::mt19937_64 rng(303);
  std::uniform_real_distribution<double> u(0.0, 2.0 * kPi / s.model.system().energies.back());
  double worst = 0.0;
  double worst_ratio_dev = 0.0;
  // Branch of the logarithm nearest to lambda t.
  auto log_near = [](cd z, cd target) {
    cd l = std::log(z);
    l.imag(l.imag() + 2.0 * kPi * std::round((target.imag() - l.imag()) / (2.0 * kPi)));
    return l;
  };
  for (int k = 0; k < 20; ++k) {
    const CountingField chi{u(rng), 0.0};
    const auto g = build_generator(s, Method::kUnified, chi);
    const cd lambda = cgf_point(g).value;
    const double e1 = std::abs(lambda - log_near(mgf(g, rho0, t), lambda * t) / t);
    const double e2 =
        std::abs(lambda - log_near(mgf(g, rho0, 2.0 * t), lambda * 2.0 * t) / (2.0 * t));
    worst = std::max(worst, e1);
    worst_ratio_dev = std::max(worst_ratio_dev, std::abs(e1 / e2 / 2.0 - 1.0));
  }
  out.check("5a", "|cgf - ln Z(t) / t| at t = 50 / gap", worst <= 1e-8,
            fmt("t = %.1f, max error %.3e (tol 1e-8)", t, worst));
  out.check("5b", "error halves when t doubles", worst_ratio_dev <= 0.1,
            fmt("max |err(t) / err(2t) / 2 - 1| = %.3e (tol 0.1)", worst_ratio_dev));
}

// 6. Finite-time symmetry of Z.
void all_times(Ledger& out) {
  const auto s = v_system(find_preset("fig2").params);
  const auto rho0 = maximally_mixed(s.basis);
  double worst = 0.0;
  for (double chi : periodic_chi_grid(s.model, 200)) {
    const CountingField field{chi, 0.0};
    const auto g = build_generator(s, Method::kUnified, field);
    const auto gs = build_generator(s, Method::kUnified, shifted_field(s.model, field));
    for (double t : {1.0, 10.0, 100.0, 1000.0}) {
      worst = std::max(worst, std::abs(mgf(g, rho0, t) - mgf(gs, rho0, t)));
    }
  }
  out.check("6", "|Z(chi, t) - Z(-chi - i beta, t)|, t in {1, 10, 100, 1000}", worst <= 1e-9,
            fmt("max %.3e (tol 1e-9)", worst));
}

// 7. Linear-response relations.
void transport(Ledger& out) {
  const auto alphas = alpha_grid(21);
  for (double delta : {0.03, 0.3}) {
    std::vector<std::vector<double>> coeff(3);
    for (std::size_t mi = 0; mi < std::size(kAllMethods); ++mi) {
      const Method m = kAllMethods[mi];
      std::vector<RelationCheck> gk, second;
      for (double a : alphas) {
        VParams p = preset("fig4a", delta);
        p.alpha = a;
        const auto s = v_system(p);
        gk.push_back(green_kubo_check(s, m, 4.0));
        second.push_back(second_order_check(s, m, 4.0));
        coeff[mi].push_back(gk.back().lhs);
      }
      double gk_worst = 0.0;
      for (const auto& r : gk) gk_worst = std::max(gk_worst, r.relative_gap);

      // Pointwise relative gap; both sides below 1e-9 of the curve scale
      // count as agreeing zeros.
      double scale = 0.0;
      for (const auto& r : second) scale = std::max(scale, std::abs(r.rhs));
      double strict = 0.0;
      double strict_at = 0.0;
      double scaled = 0.0;
      for (std::size_t k = 0; k < second.size(); ++k) {
        const auto& r = second[k];
        const double diff = std::abs(r.lhs - r.rhs);
        scaled = std::max(scaled, diff / scale);
        if (std::abs(r.rhs) <= 1e-9 * scale && std::abs(r.lhs) <= 1e-9 * scale) continue;
        const double g = diff / std::abs(r.rhs);
        if (g > strict) {
          strict = g;
          strict_at = alphas[k];
        }
      }
      const std::string tag = std::string(to_string(m)) + ", delta = " + fmt("%g", delta);
      out.check("7a", "Green-Kubo, " + tag, gk_worst <= 1e-4,
                fmt("max relative gap %.3e (tol 1e-4)", gk_worst));
      out.check("7b", "second-order relation, " + tag, strict <= 1e-3,
                fmt("max relative gap %.3e at alpha = %+.1f (tol 1e-3)", strict, strict_at));
      out.info("7b", "second-order gap normalised by max|rhs| over alpha, " + tag +
                         fmt(": %.3e", scaled));
    }

    // Closeness of the transport coefficient to Redfield (index 0).
    int unified_wins = 0;
    int secular_wins = 0;
    int positive = 0;
    int secular_wins_positive = 0;
    double sup_u = 0.0, sup_s = 0.0;
    for (std::size_t k = 0; k < alphas.size(); ++k) {
      const double du = std::abs(coeff[1][k] - coeff[0][k]);
      const double ds = std::abs(coeff[2][k] - coeff[0][k]);
      sup_u = std::max(sup_u, du);
      sup_s = std::max(sup_s, ds);
      (du < ds ? unified_wins : secular_wins)++;
      if (alphas[k] > 0.0) {
        ++positive;
        if (ds < du) ++secular_wins_positive;
      }
    }
    if (delta == 0.03) {
      out.check("7c", "unified closest to Redfield at delta = 0.03, every alpha",
                unified_wins == static_cast<int>(alphas.size()),
                fmt("unified closer at %.0f of %.0f alpha points", unified_wins,
                    static_cast<double>(alphas.size())));
      out.info("7c", fmt("sup over alpha of |coeff - Redfield|: unified %.3e, secular %.3e",
                         sup_u, sup_s));
    } else {
      out.check("7c", "secular closest to Redfield at delta = 0.3 for alpha > 0",
                secular_wins_positive == positive,
                fmt("secular closer at %.0f of %.0f alpha > 0 points", secular_wins_positive,
                    positive));
    }
  }
}

// 8. Crossover at alpha = -0.5.
void crossover(Ledger& out) {
  const VParams base = find_preset("fig5").params;
  const double gamma = golden_rule_rate(base.nu, v_system(base).model.baths()[0]);
  out.info("8", fmt("gamma_L(nu) = %.6f", gamma));
  auto count = [&](const std::vector<double>& deltas, bool want_unified) {
    const auto rows = crossover_scan(base, deltas, 0);
    int ok = 0;
    std::string labels;
    for (const auto& r : rows) {
      const double du = std::abs(r.j_unified - r.j_redfield);
      const double ds = std::abs(r.j_secular - r.j_redfield);
      if (want_unified ? du < ds : ds < du) ++ok;
      labels += std::string(to_string(r.closest)) + " ";
    }
    return std::pair<int, std::string>{ok, labels};
  };
  const auto small = log_grid(1e-4, 0.1 * gamma, 10);
  const auto large = log_grid(10.0 * gamma, 0.95 * base.nu, 10);
  const auto [su, sl] = count(small, true);
  const auto [ls, ll] = count(large, false);
  out.check("8a", "unified closest for delta <= 0.1 gamma", su == 10,
            fmt("%.0f of 10 points on [1e-4, %.4g]", su, 0.1 * gamma));
  out.info("8a", "threshold classification: " + sl);
  out.check("8b", "secular closest for delta >= 10 gamma", ls == 10,
            fmt("%.0f of 10 points on [%.4g, 0.95 nu]", ls, 10.0 * gamma));
  out.info("8b", "threshold classification: " + ll);
}

// 9. Steady-state coherences.
void coherences(Ledger& out) {
  const VParams base = find_preset("fig6").params;
  const double gamma = golden_rule_rate(base.nu, v_system(base).model.baths()[0]);
  std::vector<double> deltas;
  for (int k = 1; k <= 5; ++k) deltas.push_back(0.1 * gamma * k / 5.0);
  const auto alphas = alpha_grid(21);

  const auto rows = coherence_map(base, alphas, deltas, {Method::kUnified, Method::kRedfield}, 0);
  double peak = 0.0;
  for (const auto& r : rows) peak = std::max(peak, std::abs(r.rho23));
  double worst = 0.0, worst_alpha = 0.0, worst_delta = 0.0, scaled = 0.0;
  int zeros = 0;
  for (std::size_t k = 0; k + 1 < rows.size(); k += 2) {
    const auto& u = rows[k];
    const auto& r = rows[k + 1];
    const double diff = std::abs(u.rho23 - r.rho23);
    scaled = std::max(scaled, diff / peak);
    if (std::abs(u.rho23) <= 1e-12 * peak && std::abs(r.rho23) <= 1e-12 * peak) {
      ++zeros;
      continue;
    }
    const double g = diff / std::abs(r.rho23);
    if (g > worst) {
      worst = g;
      worst_alpha = u.alpha;
      worst_delta = u.delta;
    }
  }
  out.check("9a", "unified vs Redfield rho23 pointwise, delta <= 0.1 gamma", worst <= 0.05,
            fmt("max relative gap %.3e at alpha = %+.1f, delta = %.3g (tol 0.05)", worst,
                worst_alpha, worst_delta));
  out.info("9a", fmt("gap normalised by the grid peak |rho23|: %.3e; %.0f points with both "
                     "coherences vanishing (alpha = 1)",
                     scaled, zeros));

  bool secular_zero = true;
  for (double a : alphas) {
    for (double d : deltas) {
      VParams p = base;
      p.alpha = a;
      p.delta = d;
      const auto rho = steady_state(v_system(p), Method::kSecular);
      secular_zero = secular_zero && rho(3) == 0.0 && rho(4) == 0.0;
    }
  }
  out.check("9b", "secular coherences identically zero", secular_zero,
            secular_zero ? "exact zeros" : "nonzero coherence found");

  // Im/Re against delta / k with k the coherence damping rate -Re L_{23,23}.
  double worst_slope = 0.0;
  for (std::size_t ai = 0; ai < alphas.size(); ++ai) {
    double sxx = 0.0, sxy = 0.0;
    bool vanishing = false;
    for (std::size_t di = 0; di < deltas.size(); ++di) {
      const auto& u = rows[2 * (ai * deltas.size() + di)];
      if (std::abs(u.rho23) <= 1e-12 * peak) vanishing = true;
      sxx += u.delta * u.delta;
      sxy += u.delta * u.rho23.imag() / u.rho23.real();
    }
    if (vanishing) continue;
    VParams p = base;
    p.alpha = alphas[ai];
    const double k = -closed_form_generator(p, 0.0)(3, 3).real();
    worst_slope = std::max(worst_slope, std::abs(sxy / sxx * k - 1.0));
  }
  out.check("9c", "Im/Re rho23 slope in delta matches 1/k", worst_slope <= 0.1,
            fmt("max |slope k - 1| = %.3e over alpha with nonvanishing rho23 (tol 0.1)",
                worst_slope));
}

// 10. TUR.
void tur(Ledger& out) {
  const auto grid = log_grid(1e-3, 3.9, 40);
  for (const char* name : {"fig7a", "fig7b"}) {
    const auto s = v_system(find_preset(name).params);
    const std::string tag = fmt("alpha = %+.1f", find_preset(name).params.alpha);
    std::vector<TurScan> scans;
    double min_ratio = std::numeric_limits<double>::infinity();
    double worst_limit = 0.0;
    for (Method m : kAllMethods) {
      scans.push_back(tur_scan(s, m, 4.0, grid, 0));
      for (const auto& pt : scans.back().points) min_ratio = std::min(min_ratio, pt.ratio);
      worst_limit = std::max(worst_limit, std::abs(scans.back().limit.value() - 2.0));
    }
    out.check("10a", "TUR ratio >= 2, all methods, " + tag, min_ratio >= 2.0 - 1e-6,
              fmt("min ratio %.12f", min_ratio));
    out.check("10b", "extrapolated ratio at deltaT -> 0, " + tag, worst_limit <= 1e-3,
              fmt("max |limit - 2| = %.3e (tol 1e-3)", worst_limit));
    double worst = 0.0, at = 0.0, current_gap = 0.0;
    const auto& uni = scans[1].points;
    const auto& sec = scans[2].points;
    for (std::size_t k = 0; k < uni.size(); ++k) {
      const double g = std::abs(uni[k].ratio - sec[k].ratio) / sec[k].ratio;
      if (g > worst) {
        worst = g;
        at = uni[k].delta_t;
      }
      current_gap = std::max(current_gap, std::abs(uni[k].mean - sec[k].mean) / std::abs(sec[k].mean));
    }
    out.check("10c", "unified vs secular ratio within 2%, " + tag, worst <= 0.02,
              fmt("max relative gap %.3e at deltaT = %.3g; max mean-current gap %.1f%%", worst,
                  at, 100.0 * current_gap));
  }
}

// 11. Conservation and consistency.
void conservation(Ledger& out) {
  std::vector<VParams> cases;
  for (const auto& p : v_presets()) cases.push_back(p.params);
  std::mt19937_64 rng(404);
  for (int k = 0; k < 20; ++k) cases.push_back(random_params(rng));

  double cgf0 = 0.0, trace = 0.0, norm = 0.0, negative = 0.0, balance = 0.0, fd = 0.0;
  for (const auto& p : cases) {
    const auto s = v_system(p);
    for (Method m : kAllMethods) {
      const auto g = build_generator(s, m, zero_field(s.model));
      cgf0 = std::max(cgf0, std::abs(cgf_point(g).value));
      trace = std::max(trace, (s.basis.trace_functional() * g.matrix).cwiseAbs().maxCoeff());
      const auto c = cumulants(s, m, 0, 2);
      fd = std::max(fd, std::abs(c.mean - c.mean_from_generator) / std::abs(c.mean_from_generator));
      if (m == Method::kRedfield) continue;
      const auto rho = steady_state(s, m);
      norm = std::max(norm, std::abs(rho.head(3).sum() - 1.0));
      for (int i = 0; i < 3; ++i) negative = std::max(negative, -rho(i).real());
      const double jl = current_statistics(s, m, 0).mean;
      const double jr = current_statistics(s, m, 1).mean;
      balance = std::max(balance, std::abs(jl + jr));
    }
  }
  out.check("11a", "cgf(0) = 0", cgf0 <= 1e-10, fmt("max |cgf(0)| = %.3e (tol 1e-10)", cgf0));
  out.check("11b", "w . L(0) = 0", trace <= 1e-12, fmt("max |w . L(0)| = %.3e (tol 1e-12)", trace));
  out.check("11c", "steady-state trace = 1", norm <= 1e-12, fmt("max |tr - 1| = %.3e", norm));
  out.check("11d", "steady-state populations >= -1e-12", negative <= 1e-12,
            fmt("most negative population %.3e", -negative));
  out.check("11e", "<J_L> + <J_R> = 0", balance <= 1e-9, fmt("max |J_L + J_R| = %.3e", balance));
  out.check("11f", "finite-difference mean vs generator-derivative mean", fd <= 1e-6,
            fmt("max relative gap %.3e (tol 1e-6)", fd));
}

// 12. Limit equivalences.
void limits(Ledger& out) {
  std::mt19937_64 rng(505);
  double red = 0.0, sec = 0.0;
  for (int k = 0; k < 50; ++k) {
    const auto p = random_params(rng);
    const CountingField chi{random_chi(rng, p.nu), random_chi(rng, p.nu)};
    VParams degenerate = p;
    degenerate.delta = 0.0;
    const auto s = v_system(degenerate);
    red = std::max(red, rel_gap(build_generator(s, Method::kRedfield, chi).matrix,
                                build_generator(s, Method::kUnified, chi).matrix));
    const auto t = v_system(p);
    const auto singleton = singleton_partition(t.model.system());
    const auto basis = reduced_basis(t.model, singleton);
    sec = std::max(sec, rel_gap(build_unified(t.model, singleton, chi, basis).matrix,
                                build_secular(t.model, chi, basis).matrix));
  }
  out.check("12a", "delta = 0: unified == Redfield", red <= 1e-12,
            fmt("max relative gap %.3e (tol 1e-12)", red));
  out.check("12b", "epsilon = 0 unified == secular", sec <= 1e-14,
            fmt("max relative gap %.3e (tol 1e-14)", sec));
}

}  // namespace

int main() {
  Ledger out;
  try {
    generator_oracle(out);
    symmetry_scans(out);
    matrix_identity(out);
    long_time(out);
    all_times(out);
    transport(out);
    crossover(out);
    coherences(out);
    tur(out);
    conservation(out);
    limits(out);
  } catch (const std::exception& e) {
    std::printf("FAIL aborted: %s\n", e.what());
    return 2;
  }
  return out.finish();
}
