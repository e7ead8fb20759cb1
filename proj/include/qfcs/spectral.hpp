// spectral.hpp: dense eigenproblems, steady states, propagation and the CGF.
#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qfcs/generators.hpp"

namespace qfcs {

/// Numerical failure. Carries whatever eigenvalues were available.
class SolverError : public std::runtime_error {
 public:
  explicit SolverError(const std::string& what, Eigen::VectorXcd partial = {})
      : std::runtime_error(what), partial_(std::move(partial)) {}
  const Eigen::VectorXcd& partial() const { return partial_; }

 private:
  Eigen::VectorXcd partial_;
};

class DegenerateSteadyState : public SolverError {
 public:
  DegenerateSteadyState(std::size_t kernel_dimension)
      : SolverError("steady state is not unique: kernel dimension " +
                    std::to_string(kernel_dimension)),
        kernel_dimension_(kernel_dimension) {}
  std::size_t kernel_dimension() const { return kernel_dimension_; }

 private:
  std::size_t kernel_dimension_;
};

inline constexpr double kLinearAlgebraTolerance = 1e-10;

struct Spectrum {
  Eigen::VectorXcd eigenvalues;
  Eigen::MatrixXcd eigenvectors;  // unit columns
  /// max_k ||L v_k - lambda_k v_k||, verified after the solve.
  double residual_bound = 0.0;
};

/// All eigenpairs of a dense complex matrix. Throws SolverError on
/// non-convergence or when the residual exceeds 1e-10 ||L||_F.
Spectrum spectrum(const Eigen::MatrixXcd& matrix);

/// Normalized kernel vector of L(0). Throws DegenerateSteadyState unless the
/// kernel is one-dimensional.
Eigen::VectorXcd steady_state(const Eigen::MatrixXcd& generator, const BasisOrdering& basis);
Eigen::VectorXcd steady_state(const OpenSystem& system, Method method);

/// e^{L t} rho0 by Pade scaling and squaring. Throws std::invalid_argument
/// for t < 0 and SolverError on overflow.
Eigen::VectorXcd propagate(const Eigen::MatrixXcd& generator, const Eigen::VectorXcd& rho0,
                           double t);

/// Z = w . e^{L t} rho0.
std::complex<double> mgf(const TiltedGenerator& generator, const Eigen::VectorXcd& rho0,
                         double t);

/// Uniform populations, zero coherences.
Eigen::VectorXcd maximally_mixed(const BasisOrdering& basis);

/// Smallest |Re lambda| over the spectrum of L(0) with the kernel eigenvalue
/// removed.
double spectral_gap(const Eigen::MatrixXcd& generator);

struct CgfSample {
  CountingField chi;
  std::complex<double> value;
  /// Rank of the reported eigenvalue by descending real part; 0 = dominant.
  std::size_t branch = 0;
  double residual_bound = 0.0;
  /// Runner-up eigenvalue within twice the matching distance.
  bool ambiguous = false;
  /// Tracked branch is not the dominant eigenvalue.
  bool crossing = false;
};

/// Eigenvalue of maximal real part.
CgfSample cgf_point(const TiltedGenerator& generator);

/// Nearest-neighbour tracking through a sequence of spectra. The first
/// point starts on the eigenvalue of maximal real part.
std::vector<CgfSample> track_branch(const std::vector<Spectrum>& spectra,
                                    const std::vector<CountingField>& path);

/// CGF along `path`, spectra computed on `jobs` workers.
std::vector<CgfSample> cgf_sweep(const OpenSystem& system, Method method,
                                 const std::vector<CountingField>& path, std::size_t jobs = 1);

/// Bottleneck distance between two eigenvalue multisets of equal size:
/// min over matchings of the largest pair distance. Exact for up to eight
/// values, greedy beyond.
double multiset_distance(const Eigen::VectorXcd& x, const Eigen::VectorXcd& y);

}  // namespace qfcs
