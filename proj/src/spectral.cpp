#include "qfcs/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include "qfcs/parallel.hpp"

namespace qfcs {

Spectrum spectrum(const Eigen::MatrixXcd& matrix) {
  if (matrix.rows() != matrix.cols()) throw std::invalid_argument("spectrum needs a square matrix");
  if (!matrix.allFinite()) throw std::invalid_argument("spectrum needs finite entries");
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(matrix, true);
  if (solver.info() != Eigen::Success) {
    throw SolverError("eigenvalue iteration did not converge", solver.eigenvalues());
  }
  Spectrum out{solver.eigenvalues(), solver.eigenvectors(), 0.0};
  for (Eigen::Index k = 0; k < out.eigenvalues.size(); ++k) {
    auto v = out.eigenvectors.col(k);
    const double norm = v.norm();
    if (norm == 0.0) throw SolverError("zero eigenvector", out.eigenvalues);
    v /= norm;
    out.residual_bound =
        std::max(out.residual_bound, (matrix * v - out.eigenvalues(k) * v).norm());
  }
  const double scale = matrix.norm();
  if (out.residual_bound > kLinearAlgebraTolerance * std::max(scale, 1e-300) &&
      out.residual_bound > 0.0) {
    throw SolverError("eigenpair residual " + std::to_string(out.residual_bound) +
                          " exceeds certificate",
                      out.eigenvalues);
  }
  return out;
}

Eigen::VectorXcd steady_state(const Eigen::MatrixXcd& generator, const BasisOrdering& basis) {
  const auto m = generator.rows();
  if (generator.cols() != m || static_cast<std::size_t>(m) != basis.size()) {
    throw std::invalid_argument("generator does not match the basis");
  }
  Eigen::FullPivLU<Eigen::MatrixXcd> rank_probe(generator);
  rank_probe.setThreshold(kLinearAlgebraTolerance);
  const auto kernel = static_cast<std::size_t>(m - rank_probe.rank());
  if (kernel != 1) throw DegenerateSteadyState(kernel);

  // The population rows sum to zero, so the first one can be traded for
  // the normalization condition w . rho = 1.
  const Eigen::RowVectorXcd w = basis.trace_functional();
  Eigen::MatrixXcd system = generator;
  system.row(0) = w;
  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(m);
  rhs(0) = 1.0;
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(system);
  Eigen::VectorXcd rho = lu.solve(rhs);
  for (int pass = 0; pass < 2; ++pass) rho += lu.solve(rhs - system * rho);
  if (!rho.allFinite()) throw SolverError("steady-state solve produced non-finite entries");
  return rho;
}

Eigen::VectorXcd steady_state(const OpenSystem& system, Method method) {
  return steady_state(build_generator(system, method, zero_field(system.model)).matrix,
                      system.basis);
}

Eigen::VectorXcd propagate(const Eigen::MatrixXcd& generator, const Eigen::VectorXcd& rho0,
                           double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("propagation time must be >= 0");
  if (generator.cols() != rho0.size()) throw std::invalid_argument("state size mismatch");
  if (t == 0.0) return rho0;
  const Eigen::MatrixXcd scaled = generator * t;
  const Eigen::MatrixXcd e = scaled.exp();
  if (!e.allFinite()) throw SolverError("matrix exponential overflowed");
  return e * rho0;
}

std::complex<double> mgf(const TiltedGenerator& generator, const Eigen::VectorXcd& rho0,
                         double t) {
  return (generator.ordering.trace_functional() * propagate(generator.matrix, rho0, t))(0);
}

Eigen::VectorXcd maximally_mixed(const BasisOrdering& basis) {
  Eigen::VectorXcd rho = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis.size()));
  for (std::size_t a = 0; a < basis.levels(); ++a) {
    rho(static_cast<Eigen::Index>(a)) = 1.0 / static_cast<double>(basis.levels());
  }
  return rho;
}

double spectral_gap(const Eigen::MatrixXcd& generator) {
  const auto s = spectrum(generator);
  const auto& ev = s.eigenvalues;
  if (ev.size() < 2) throw SolverError("spectral gap needs at least two eigenvalues");
  Eigen::Index kernel = 0;
  ev.cwiseAbs().minCoeff(&kernel);
  double gap = std::numeric_limits<double>::infinity();
  for (Eigen::Index k = 0; k < ev.size(); ++k) {
    if (k != kernel) gap = std::min(gap, std::abs(ev(k).real()));
  }
  if (!(gap > 0.0)) throw SolverError("generator has no relaxation gap");
  return gap;
}

namespace {

std::vector<Eigen::Index> descending_real_order(const Eigen::VectorXcd& ev) {
  std::vector<Eigen::Index> order(static_cast<std::size_t>(ev.size()));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index x, Eigen::Index y) {
    return ev(x).real() > ev(y).real();
  });
  return order;
}

std::size_t rank_of(const std::vector<Eigen::Index>& order, Eigen::Index k) {
  return static_cast<std::size_t>(std::find(order.begin(), order.end(), k) - order.begin());
}

}  // namespace

CgfSample cgf_point(const TiltedGenerator& generator) {
  const auto s = spectrum(generator.matrix);
  const auto order = descending_real_order(s.eigenvalues);
  CgfSample out;
  out.chi = generator.chi;
  out.value = s.eigenvalues(order.front());
  out.residual_bound = s.residual_bound;
  return out;
}

std::vector<CgfSample> track_branch(const std::vector<Spectrum>& spectra,
                                    const std::vector<CountingField>& path) {
  if (spectra.size() != path.size()) throw std::invalid_argument("path and spectra differ");
  std::vector<CgfSample> out;
  out.reserve(spectra.size());
  std::complex<double> previous;
  for (std::size_t i = 0; i < spectra.size(); ++i) {
    const auto& ev = spectra[i].eigenvalues;
    const auto order = descending_real_order(ev);
    CgfSample sample;
    sample.chi = path[i];
    sample.residual_bound = spectra[i].residual_bound;
    if (i == 0) {
      sample.value = ev(order.front());
    } else {
      double nearest = std::numeric_limits<double>::infinity();
      double runner_up = nearest;
      Eigen::Index pick = 0;
      for (Eigen::Index k = 0; k < ev.size(); ++k) {
        const double d = std::abs(ev(k) - previous);
        if (d < nearest) {
          runner_up = nearest;
          nearest = d;
          pick = k;
        } else if (d < runner_up) {
          runner_up = d;
        }
      }
      sample.value = ev(pick);
      sample.branch = rank_of(order, pick);
      sample.ambiguous = runner_up <= 2.0 * nearest;
      sample.crossing = sample.branch != 0;
    }
    previous = sample.value;
    out.push_back(std::move(sample));
  }
  return out;
}

std::vector<CgfSample> cgf_sweep(const OpenSystem& system, Method method,
                                 const std::vector<CountingField>& path, std::size_t jobs) {
  std::vector<Spectrum> spectra(path.size());
  parallel_for(path.size(), jobs, [&](std::size_t i) {
    spectra[i] = spectrum(build_generator(system, method, path[i]).matrix);
  });
  return track_branch(spectra, path);
}

double multiset_distance(const Eigen::VectorXcd& x, const Eigen::VectorXcd& y) {
  if (x.size() != y.size()) throw std::invalid_argument("multisets differ in size");
  const auto n = static_cast<std::size_t>(x.size());
  if (n == 0) return 0.0;
  Eigen::MatrixXd d(x.size(), y.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    for (Eigen::Index j = 0; j < y.size(); ++j) d(i, j) = std::abs(x(i) - y(j));
  }
  if (n <= 8) {
    std::vector<Eigen::Index> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    double best = std::numeric_limits<double>::infinity();
    do {
      double worst = 0.0;
      for (std::size_t i = 0; i < n && worst < best; ++i) {
        worst = std::max(worst, d(static_cast<Eigen::Index>(i), perm[i]));
      }
      best = std::min(best, worst);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
  }
  std::vector<bool> used(n, false);
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double nearest = std::numeric_limits<double>::infinity();
    std::size_t pick = 0;
    for (std::size_t j = 0; j < n; ++j) {
      const double dij = d(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      if (!used[j] && dij < nearest) {
        nearest = dij;
        pick = j;
      }
    }
    used[pick] = true;
    worst = std::max(worst, nearest);
  }
  return worst;
}

}  // namespace qfcs
