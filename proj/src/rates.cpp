#include "qfcs/rates.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qfcs {

double bose_occupation(double omega, double temperature) {
  if (!(omega > 0.0)) throw std::domain_error("bose_occupation needs omega > 0");
  if (!(temperature > 0.0)) throw std::domain_error("bose_occupation needs T > 0");
  return 1.0 / std::expm1(omega / temperature);
}

double ohmic_spectral_density(double omega, double a) { return a * omega; }

double golden_rule_rate(double omega, const BathSpec& bath) {
  if (omega > 0.0) {
    return ohmic_spectral_density(omega, bath.ohmic_a) *
           (bose_occupation(omega, bath.temperature) + 1.0);
  }
  if (omega < 0.0) {
    return ohmic_spectral_density(-omega, bath.ohmic_a) * bose_occupation(-omega, bath.temperature);
  }
  return bath.ohmic_a * bath.temperature;
}

std::complex<double> dress_rate(double rate, double omega, std::complex<double> chi) {
  return rate * std::exp(std::complex<double>(0.0, -omega) * chi);
}

RateTable::RateTable(const std::vector<BathSpec>& baths, const std::vector<double>& frequencies)
    : baths_(baths), frequencies_(frequencies) {
  std::sort(frequencies_.begin(), frequencies_.end());
  frequencies_.erase(std::unique(frequencies_.begin(), frequencies_.end()), frequencies_.end());
  entries_.reserve(baths_.size() * frequencies_.size());
  for (std::size_t j = 0; j < baths_.size(); ++j) {
    for (double w : frequencies_) entries_.push_back({j, w, golden_rule_rate(w, baths_[j])});
  }
}

RateTable RateTable::for_partition(const std::vector<BathSpec>& baths,
                                   const ClusterPartition& partition) {
  std::vector<double> centers;
  for (const auto& c : partition.clusters()) centers.push_back(c.center);
  return RateTable(baths, centers);
}

double RateTable::rate(std::size_t bath, double omega) const {
  auto it = std::lower_bound(frequencies_.begin(), frequencies_.end(), omega);
  if (bath >= baths_.size() || it == frequencies_.end() || *it != omega) {
    // Frequencies outside the table are evaluated directly.
    return golden_rule_rate(omega, baths_.at(bath));
  }
  return entries_[bath * frequencies_.size() + static_cast<std::size_t>(it - frequencies_.begin())]
      .rate;
}

double RateTable::detailed_balance_residual() const {
  double worst = 0.0;
  for (const auto& e : entries_) {
    if (e.omega <= 0.0) continue;
    auto it = std::lower_bound(frequencies_.begin(), frequencies_.end(), -e.omega);
    if (it == frequencies_.end() || *it != -e.omega) continue;
    const double down = e.rate;
    const double up = rate(e.bath, -e.omega);
    const double predicted = down * std::exp(-baths_[e.bath].beta() * e.omega);
    worst = std::max(worst, std::abs(up - predicted) / std::max(std::abs(predicted), 1e-300));
  }
  return worst;
}

}  // namespace qfcs
