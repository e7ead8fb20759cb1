// rates.hpp: golden-rule rates for Ohmic bosonic baths and counting-field dressing.
#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "qfcs/model.hpp"

namespace qfcs {

/// Bose-Einstein occupation 1 / (exp(omega / T) - 1). Requires omega > 0, T > 0.
double bose_occupation(double omega, double temperature);

/// Ohmic spectral density J(omega) = a * omega.
double ohmic_spectral_density(double omega, double a);

/// Rate for a transition releasing `omega` into the bath: J(w)[n(w) + 1] for
/// w > 0, J(|w|) n(|w|) for w < 0, and the analytic limit a T at w = 0. The
/// imaginary (Lamb) part of the half-sided transform is not modeled.
double golden_rule_rate(double omega, const BathSpec& bath);

/// exp(-i omega chi) * rate. Complex chi is allowed.
std::complex<double> dress_rate(double rate, double omega, std::complex<double> chi);

/// Rates per (bath, frequency), built once and looked up during assembly.
class RateTable {
 public:
  struct Entry {
    std::size_t bath;
    double omega;
    double rate;
  };

  RateTable(const std::vector<BathSpec>& baths, const std::vector<double>& frequencies);

  /// Cluster-center rates for every bath.
  static RateTable for_partition(const std::vector<BathSpec>& baths,
                                 const ClusterPartition& partition);

  double rate(std::size_t bath, double omega) const;
  const std::vector<Entry>& entries() const { return entries_; }
  const std::vector<BathSpec>& baths() const { return baths_; }

  /// Largest relative violation of gamma(-w) e^{beta w} = gamma(w) over all
  /// stored (w, -w) pairs.
  double detailed_balance_residual() const;

 private:
  std::vector<BathSpec> baths_;
  std::vector<double> frequencies_;  // ascending, shared by all baths
  std::vector<Entry> entries_;       // bath-major
};

}  // namespace qfcs
