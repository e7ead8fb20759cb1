#include "qfcs/fcs.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qfcs/parallel.hpp"

namespace qfcs {

double default_chi_step(const CheckedModel& model) {
  double scale = 0.0;
  for (const auto& f : bohr_frequencies(model)) scale = std::max(scale, std::abs(f.value));
  if (scale == 0.0) throw ModelError("model has no nonzero Bohr frequency");
  return 1e-3 / scale;
}

namespace {

// G along s = i chi on one side of the stencil: s = 0, sign*h/2, sign*h, sign*2h.
std::vector<CgfSample> half_stencil(const OpenSystem& system, Method method, std::size_t bath,
                                    double h, double sign) {
  std::vector<CountingField> path;
  for (double s : {0.0, 0.5 * h, h, 2.0 * h}) {
    path.push_back(single_bath_field(system.model, bath, std::complex<double>(0.0, -sign * s)));
  }
  return cgf_sweep(system, method, path);
}

}  // namespace

CumulantSet cumulants(const OpenSystem& system, Method method, std::size_t bath, int order,
                      double h) {
  if (order < 1 || order > 3) throw std::invalid_argument("cumulant order must be 1, 2 or 3");
  if (bath >= system.model.bath_count()) throw ModelError("bath index out of range");
  if (h <= 0.0) h = default_chi_step(system.model);

  const auto plus = half_stencil(system, method, bath, h, 1.0);
  const auto minus = half_stencil(system, method, bath, h, -1.0);
  CumulantSet out;
  out.step = h;
  for (const auto* side : {&plus, &minus}) {
    for (const auto& s : *side) out.branch_warning |= s.ambiguous || s.crossing;
  }
  // g(k) with k in units of h/2: k = 0, +-1, +-2, +-4.
  auto g = [&](int k) {
    if (k == 0) return plus[0].value.real();
    const auto& side = k > 0 ? plus : minus;
    const int m = std::abs(k);
    return side[m == 1 ? 1 : (m == 2 ? 2 : 3)].value.real();
  };
  auto richardson = [](double coarse, double fine) { return (4.0 * fine - coarse) / 3.0; };

  const double hh = 0.5 * h;
  auto d1 = [&](int k, double step) { return (g(k) - g(-k)) / (2.0 * step); };
  out.mean = richardson(d1(2, h), d1(1, hh));
  if (order >= 2) {
    auto d2 = [&](int k, double step) { return (g(k) - 2.0 * g(0) + g(-k)) / (step * step); };
    out.variance = richardson(d2(2, h), d2(1, hh));
  }
  if (order >= 3) {
    auto d3 = [&](int k, double step) {
      return (g(2 * k) - 2.0 * g(k) + 2.0 * g(-k) - g(-2 * k)) / (2.0 * step * step * step);
    };
    out.third = richardson(d3(2, h), d3(1, hh));
  }
  out.mean_from_generator = current_statistics(system, method, bath).mean;
  return out;
}

CurrentStatistics current_statistics(const OpenSystem& system, Method method, std::size_t bath) {
  if (bath >= system.model.bath_count()) throw ModelError("bath index out of range");
  const Eigen::MatrixXcd l0 = build_generator(system, method, zero_field(system.model)).matrix;
  const Eigen::VectorXcd rho = steady_state(l0, system.basis);
  const Eigen::RowVectorXcd w = system.basis.trace_functional();
  const Eigen::MatrixXcd l1 = generator_derivative(system, method, bath, 1);
  const Eigen::MatrixXcd l2 = generator_derivative(system, method, bath, 2);

  const std::complex<double> mean = (w * l1 * rho)(0);
  const Eigen::VectorXcd projected = l1 * rho - mean * rho;
  // L - rho w is invertible and acts as L on the traceless subspace.
  const Eigen::MatrixXcd shifted = l0 - rho * w;
  const Eigen::VectorXcd x = shifted.partialPivLu().solve(projected);
  const std::complex<double> variance = (w * l2 * rho)(0) - 2.0 * (w * l1 * x)(0);
  return {mean.real(), variance.real()};
}

SymmetryReport fluctuation_symmetry_scan(const OpenSystem& system, Method method,
                                         const std::vector<double>& chi_grid, std::size_t bath,
                                         std::size_t jobs) {
  if (chi_grid.empty() || chi_grid.front() != 0.0) {
    throw std::invalid_argument("symmetry grid must start at chi = 0");
  }
  for (double c : chi_grid) {
    if (!std::isfinite(c)) throw std::invalid_argument("symmetry grid must be finite");
  }
  const std::size_t n = chi_grid.size();
  std::vector<CountingField> direct(n), shifted(n);
  for (std::size_t i = 0; i < n; ++i) {
    direct[i] = single_bath_field(system.model, bath, chi_grid[i]);
    shifted[i] = shifted_field(system.model, direct[i]);
  }
  std::vector<Spectrum> sd(n), ss(n);
  parallel_for(2 * n, jobs, [&](std::size_t k) {
    const std::size_t i = k % n;
    if (k < n) {
      sd[i] = spectrum(build_generator(system, method, direct[i]).matrix);
    } else {
      ss[i] = spectrum(build_generator(system, method, shifted[i]).matrix);
    }
  });
  const auto gd = track_branch(sd, direct);
  const auto gs = track_branch(ss, shifted);

  SymmetryReport report;
  report.method = method;
  report.points.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    SymmetryPoint p;
    p.chi = chi_grid[i];
    p.g = gd[i].value;
    p.g_shifted = gs[i].value;
    const auto diff = p.g - p.g_shifted;
    p.re_residual = std::abs(diff.real());
    p.im_residual = std::abs(diff.imag());
    p.residual = std::abs(diff);
    p.spectrum_distance = multiset_distance(sd[i].eigenvalues, ss[i].eigenvalues);
    p.ambiguous = gd[i].ambiguous || gs[i].ambiguous;
    p.crossing = gd[i].crossing || gs[i].crossing;
    report.max_residual = std::max(report.max_residual, p.residual);
    report.max_re_residual = std::max(report.max_re_residual, p.re_residual);
    report.max_im_residual = std::max(report.max_im_residual, p.im_residual);
    report.max_spectrum_distance = std::max(report.max_spectrum_distance, p.spectrum_distance);
    report.points.push_back(p);
  }
  return report;
}

std::vector<double> periodic_chi_grid(const CheckedModel& model, std::size_t n) {
  if (n == 0) throw std::invalid_argument("grid needs at least one point");
  const double period = 2.0 * std::numbers::pi * 1e-3 / default_chi_step(model);
  std::vector<double> grid(n, 0.0);
  for (std::size_t i = 1; i < n; ++i) {
    grid[i] = period * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  return grid;
}

namespace {

void require_two_baths(const CheckedModel& model) {
  if (model.bath_count() != 2) throw ModelError("transport drivers need exactly two baths");
}

}  // namespace

OpenSystem at_inverse_temperatures(const OpenSystem& system, double beta_bar,
                                   double delta_beta) {
  require_two_baths(system.model);
  const double beta_left = beta_bar - 0.5 * delta_beta;
  const double beta_right = beta_bar + 0.5 * delta_beta;
  if (!(beta_left > 0.0) || !(beta_right > 0.0)) throw ModelError("non-positive temperature");
  return system.with_temperatures({1.0 / beta_left, 1.0 / beta_right});
}

RelationCheck green_kubo_check(const OpenSystem& system, Method method, double t_bar,
                               double h_beta) {
  if (!(t_bar > 0.0)) throw ModelError("non-positive temperature");
  const double beta_bar = 1.0 / t_bar;
  if (h_beta <= 0.0) h_beta = 1e-4 * beta_bar;
  auto stats = [&](double db) {
    return current_statistics(at_inverse_temperatures(system, beta_bar, db), method, 0);
  };
  const auto up = stats(h_beta);
  const auto down = stats(-h_beta);
  const auto eq = stats(0.0);
  RelationCheck out;
  out.lhs = (up.mean - down.mean) / (2.0 * h_beta);
  out.rhs = 0.5 * eq.variance;
  out.relative_gap = std::abs(out.lhs - out.rhs) / std::abs(out.rhs);
  return out;
}

RelationCheck second_order_check(const OpenSystem& system, Method method, double t_bar,
                                 double h_beta) {
  if (!(t_bar > 0.0)) throw ModelError("non-positive temperature");
  const double beta_bar = 1.0 / t_bar;
  if (h_beta <= 0.0) h_beta = 1e-2 * beta_bar;
  std::array<CurrentStatistics, 5> s;
  for (int k = -2; k <= 2; ++k) {
    s[static_cast<std::size_t>(k + 2)] = current_statistics(
        at_inverse_temperatures(system, beta_bar, k * h_beta), method, 0);
  }
  const double h2 = h_beta * h_beta;
  RelationCheck out;
  out.lhs = (-s[4].mean + 16.0 * s[3].mean - 30.0 * s[2].mean + 16.0 * s[1].mean - s[0].mean) /
            (12.0 * h2);
  out.rhs = (-s[4].variance + 8.0 * s[3].variance - 8.0 * s[1].variance + s[0].variance) /
            (12.0 * h_beta);
  out.relative_gap = std::abs(out.lhs - out.rhs) / std::abs(out.rhs);
  return out;
}

TurScan tur_scan(const OpenSystem& system, Method method, double t_bar,
                 const std::vector<double>& delta_t_grid, std::size_t jobs) {
  require_two_baths(system.model);
  if (!(t_bar > 0.0)) throw ModelError("non-positive temperature");
  std::vector<double> grid;
  for (double dt : delta_t_grid) {
    if (dt > 0.0) grid.push_back(dt);
  }
  TurScan out;
  out.method = method;
  out.points.resize(grid.size());
  parallel_for(grid.size(), jobs, [&](std::size_t i) {
    const double dt = grid[i];
    const double t_left = t_bar + 0.5 * dt;
    const double t_right = t_bar - 0.5 * dt;
    if (!(t_right > 0.0)) throw ModelError("non-positive temperature");
    const auto stats =
        current_statistics(system.with_temperatures({t_left, t_right}), method, 0);
    const double delta_beta = 1.0 / t_right - 1.0 / t_left;
    out.points[i] = {dt, stats.mean, stats.variance, delta_beta * stats.variance / stats.mean};
  });
  if (out.points.size() >= 3) {
    auto sorted = out.points;
    std::sort(sorted.begin(), sorted.end(),
              [](const TurPoint& x, const TurPoint& y) { return x.delta_t < y.delta_t; });
    double limit = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
      double basis = 1.0;
      for (std::size_t j = 0; j < 3; ++j) {
        if (j != i) basis *= sorted[j].delta_t / (sorted[j].delta_t - sorted[i].delta_t);
      }
      limit += basis * sorted[i].ratio;
    }
    out.limit = limit;
  }
  return out;
}

std::string_view to_string(Closeness c) {
  switch (c) {
    case Closeness::kUnified:
      return "unified";
    case Closeness::kSecular:
      return "secular";
    case Closeness::kCrossover:
      return "crossover";
  }
  return "unknown";
}

Closeness classify_closeness(double j_redfield, double j_unified, double j_secular,
                             double threshold) {
  const double spread = threshold * std::abs(j_secular - j_unified);
  const bool unified = std::abs(j_unified - j_redfield) <= spread;
  const bool secular = std::abs(j_secular - j_redfield) <= spread;
  if (unified) return Closeness::kUnified;
  if (secular) return Closeness::kSecular;
  return Closeness::kCrossover;
}

std::vector<CrossoverRow> crossover_scan(const VParams& base, const std::vector<double>& deltas,
                                         std::size_t jobs) {
  std::vector<CrossoverRow> rows(deltas.size());
  parallel_for(deltas.size(), jobs, [&](std::size_t i) {
    VParams p = base;
    p.delta = deltas[i];
    const auto system = v_system(p);
    CrossoverRow row;
    row.delta = p.delta;
    row.j_redfield = current_statistics(system, Method::kRedfield, 0).mean;
    row.j_unified = current_statistics(system, Method::kUnified, 0).mean;
    row.j_secular = current_statistics(system, Method::kSecular, 0).mean;
    row.closest = classify_closeness(row.j_redfield, row.j_unified, row.j_secular);
    rows[i] = row;
  });
  return rows;
}

std::vector<CoherenceRow> coherence_map(const VParams& base, const std::vector<double>& alphas,
                                        const std::vector<double>& deltas,
                                        const std::vector<Method>& methods, std::size_t jobs) {
  for (Method m : methods) {
    if (m == Method::kSecular) {
      throw std::invalid_argument(
          "coherence map does not support the secular method: its steady-state coherences "
          "vanish identically");
    }
  }
  const std::size_t per_alpha = deltas.size() * methods.size();
  std::vector<CoherenceRow> rows(alphas.size() * per_alpha);
  parallel_for(alphas.size() * deltas.size(), jobs, [&](std::size_t k) {
    const std::size_t ia = k / deltas.size();
    const std::size_t id = k % deltas.size();
    VParams p = base;
    p.alpha = alphas[ia];
    p.delta = deltas[id];
    const auto system = v_system(p);
    const auto pos = *system.basis.index_of(1, 2);
    for (std::size_t im = 0; im < methods.size(); ++im) {
      const auto rho = steady_state(system, methods[im]);
      rows[ia * per_alpha + id * methods.size() + im] = {
          p.alpha, p.delta, methods[im], rho(static_cast<Eigen::Index>(pos))};
    }
  });
  return rows;
}

double entropy_production(const CheckedModel& model, double mean_current) {
  require_two_baths(model);
  return (model.baths()[1].beta() - model.baths()[0].beta()) * mean_current;
}

}  // namespace qfcs
