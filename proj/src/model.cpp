#include "qfcs/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

namespace qfcs {

namespace {

double spectral_scale(const std::vector<double>& energies) {
  double scale = 1.0;
  for (double e : energies) scale = std::max(scale, std::abs(e));
  return scale;
}

double tie_tolerance(const std::vector<double>& energies) {
  return 1e-12 * spectral_scale(energies);
}

// Index of `value` in the ascending `sorted` list, matching within `tol`.
std::size_t find_value(const std::vector<double>& sorted, double value, double tol) {
  auto it = std::lower_bound(sorted.begin(), sorted.end(), value - tol);
  if (it == sorted.end() || std::abs(*it - value) > tol) {
    throw ModelError("frequency lookup failed");
  }
  return static_cast<std::size_t>(it - sorted.begin());
}

// Distinct values of E_a - E_b in ascending order, merged within `tol`.
std::vector<double> distinct_frequencies(const std::vector<double>& energies, double tol) {
  std::vector<double> all;
  all.reserve(energies.size() * energies.size());
  for (double ea : energies) {
    for (double eb : energies) all.push_back(ea - eb);
  }
  std::sort(all.begin(), all.end());
  std::vector<double> out;
  for (double w : all) {
    if (out.empty() || w - out.back() > tol) out.push_back(w);
  }
  // Pin the zero entry and make the list exactly antisymmetric so that mirror
  // lookups never depend on rounding of E_a - E_b versus E_b - E_a.
  const std::size_t n = out.size();
  for (std::size_t i = 0; i < n / 2; ++i) {
    const double mag = 0.5 * (out[n - 1 - i] - out[i]);
    out[i] = -mag;
    out[n - 1 - i] = mag;
  }
  if (n % 2 == 1) out[n / 2] = 0.0;
  return out;
}

}  // namespace

std::size_t CheckedModel::bath_index(const std::string& id) const {
  for (std::size_t j = 0; j < baths_.size(); ++j) {
    if (baths_[j].id == id) return j;
  }
  throw ModelError("unknown bath id '" + id + "'");
}

CheckedModel CheckedModel::with_temperatures(const std::vector<double>& temperatures) const {
  if (temperatures.size() != baths_.size()) {
    throw ModelError("temperature count does not match bath count");
  }
  std::vector<BathSpec> baths = baths_;
  for (std::size_t j = 0; j < baths.size(); ++j) baths[j].temperature = temperatures[j];
  return validate_model(system_, std::move(baths));
}

CheckedModel validate_model(SystemModel model, std::vector<BathSpec> baths) {
  const std::size_t n = model.levels();
  if (n < 2) throw ModelError("model needs at least two levels");
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(model.energies[i])) throw ModelError("non-finite energy");
    if (i > 0 && model.energies[i] < model.energies[i - 1]) {
      throw ModelError("energies must be sorted ascending");
    }
  }

  std::set<std::string> ids;
  for (const auto& bath : baths) {
    if (bath.id.empty()) throw ModelError("bath id must be non-empty");
    if (!ids.insert(bath.id).second) throw ModelError("duplicate bath id '" + bath.id + "'");
    if (!(bath.temperature > 0.0) || !std::isfinite(bath.temperature)) {
      throw ModelError("non-positive temperature for bath '" + bath.id + "'");
    }
    if (!(bath.ohmic_a > 0.0) || !std::isfinite(bath.ohmic_a)) {
      throw ModelError("non-positive ohmic coefficient for bath '" + bath.id + "'");
    }
  }

  CheckedModel checked;
  std::set<std::string> coupled;
  for (const auto& coupling : model.couplings) {
    const auto& s = coupling.matrix;
    if (static_cast<std::size_t>(s.rows()) != n || static_cast<std::size_t>(s.cols()) != n) {
      throw ModelError("coupling matrix for bath '" + coupling.bath_id + "' is not N x N");
    }
    if (!s.allFinite()) throw ModelError("non-finite coupling matrix entry");
    const double tol = 1e-12 * std::max(1.0, s.cwiseAbs().maxCoeff());
    if ((s - s.transpose()).cwiseAbs().maxCoeff() > tol) {
      throw ModelError("non-symmetric coupling for bath '" + coupling.bath_id + "'");
    }
    auto it = std::find_if(baths.begin(), baths.end(),
                           [&](const BathSpec& b) { return b.id == coupling.bath_id; });
    if (it == baths.end()) throw ModelError("unknown bath id '" + coupling.bath_id + "'");
    if (!coupled.insert(coupling.bath_id).second) {
      throw ModelError("duplicate coupling for bath '" + coupling.bath_id +
                       "' (one operator per bath is supported)");
    }
    checked.coupling_bath_.push_back(static_cast<std::size_t>(it - baths.begin()));
  }
  checked.system_ = std::move(model);
  checked.baths_ = std::move(baths);
  return checked;
}

std::vector<BohrFrequency> bohr_frequencies(const SystemModel& model) {
  const auto& e = model.energies;
  const double tol = tie_tolerance(e);
  const auto values = distinct_frequencies(e, tol);
  std::vector<BohrFrequency> out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) out[i].value = values[i];
  for (std::size_t a = 0; a < e.size(); ++a) {
    for (std::size_t b = 0; b < e.size(); ++b) {
      out[find_value(values, e[a] - e[b], tol)].pairs.push_back({a, b});
    }
  }
  return out;
}

ClusterPartition::ClusterPartition(std::size_t levels, std::vector<double> energies,
                                   std::vector<std::size_t> assignment,
                                   std::vector<double> centers)
    : levels_(levels), assignment_(std::move(assignment)) {
  if (energies.size() != levels || assignment_.size() != levels * levels) {
    throw ModelError("partition assignment does not cover all level pairs");
  }
  const std::size_t nc = centers.size();
  const double tol = tie_tolerance(energies);

  std::vector<std::vector<LevelPair>> pairs(nc);
  for (std::size_t a = 0; a < levels; ++a) {
    for (std::size_t b = 0; b < levels; ++b) {
      const std::size_t c = assignment_[a * levels + b];
      if (c >= nc) throw ModelError("partition assignment refers to a missing cluster");
      pairs[c].push_back({a, b});
    }
  }

  mirror_.assign(nc, nc);
  for (std::size_t c = 0; c < nc; ++c) {
    if (pairs[c].empty()) throw ModelError("empty frequency cluster");
    const std::size_t m = cluster_of(pairs[c].front().b, pairs[c].front().a);
    for (const auto& p : pairs[c]) {
      if (cluster_of(p.b, p.a) != m) throw ModelError("partition is not closed under negation");
    }
    if (centers[m] != -centers[c]) {
      throw ModelError("mirror cluster centers are not exact negatives");
    }
    mirror_[c] = m;
  }

  clusters_.resize(nc);
  for (std::size_t c = 0; c < nc; ++c) {
    clusters_[c].center = centers[c];
    std::map<double, std::vector<LevelPair>> by_value;
    for (const auto& p : pairs[c]) {
      const double w = energies[p.a] - energies[p.b];
      auto it = std::find_if(by_value.begin(), by_value.end(),
                             [&](const auto& kv) { return std::abs(kv.first - w) <= tol; });
      if (it == by_value.end()) {
        by_value[w].push_back(p);
      } else {
        it->second.push_back(p);
      }
    }
    for (auto& [w, ps] : by_value) clusters_[c].members.push_back({w, std::move(ps)});
  }
}

namespace {

// Builds a partition from a cluster label per distinct frequency value.
ClusterPartition partition_from_labels(const SystemModel& model,
                                       const std::vector<BohrFrequency>& freqs,
                                       const std::vector<std::size_t>& label,
                                       const std::vector<double>& label_center) {
  // Compact labels to the ones actually used, in ascending center order.
  std::vector<std::size_t> used(label.begin(), label.end());
  std::sort(used.begin(), used.end(), [&](std::size_t x, std::size_t y) {
    return label_center[x] < label_center[y] || (label_center[x] == label_center[y] && x < y);
  });
  used.erase(std::unique(used.begin(), used.end()), used.end());
  std::vector<std::size_t> remap(label_center.size(), 0);
  std::vector<double> centers;
  for (std::size_t i = 0; i < used.size(); ++i) {
    remap[used[i]] = i;
    centers.push_back(label_center[used[i]]);
  }
  const std::size_t n = model.levels();
  std::vector<std::size_t> assignment(n * n, 0);
  for (std::size_t f = 0; f < freqs.size(); ++f) {
    for (const auto& p : freqs[f].pairs) assignment[p.a * n + p.b] = remap[label[f]];
  }
  return ClusterPartition(n, model.energies, std::move(assignment), std::move(centers));
}

}  // namespace

ClusterPartition cluster_frequencies(const SystemModel& model, double epsilon) {
  if (!(epsilon >= 0.0)) throw ModelError("cluster width must be non-negative");
  const auto freqs = bohr_frequencies(model);
  // freqs is exactly antisymmetric; the non-negative half drives the linkage.
  const std::size_t nf = freqs.size();
  const std::size_t zero = nf / 2;

  std::vector<std::size_t> group(nf, 0);
  std::vector<std::vector<std::size_t>> groups{{zero}};
  for (std::size_t f = zero + 1; f < nf; ++f) {
    if (freqs[f].value - freqs[f - 1].value > epsilon) groups.emplace_back();
    groups.back().push_back(f);
  }

  // Label 2g for the positive side of group g, 2g+1 for its mirror; the zero
  // group keeps a single symmetric label.
  std::vector<std::size_t> label(nf, 0);
  std::vector<double> center(2 * groups.size(), 0.0);
  for (std::size_t g = 0; g < groups.size(); ++g) {
    double sum = 0.0;
    for (std::size_t f : groups[g]) sum += freqs[f].value;
    const bool has_zero = groups[g].front() == zero;
    const double mean = has_zero ? 0.0 : sum / static_cast<double>(groups[g].size());
    center[2 * g] = mean;
    center[2 * g + 1] = -mean;
    for (std::size_t f : groups[g]) {
      const std::size_t mirror = nf - 1 - f;
      label[f] = 2 * g;
      label[mirror] = has_zero ? 2 * g : 2 * g + 1;
    }
  }
  return partition_from_labels(model, freqs, label, center);
}

ClusterPartition partition_with_centers(const SystemModel& model,
                                        const std::vector<double>& centers) {
  std::vector<double> symmetric{0.0};
  for (double c : centers) {
    if (!std::isfinite(c)) throw ModelError("non-finite cluster center");
    if (c != 0.0) {
      symmetric.push_back(std::abs(c));
      symmetric.push_back(-std::abs(c));
    }
  }
  std::sort(symmetric.begin(), symmetric.end());
  symmetric.erase(std::unique(symmetric.begin(), symmetric.end()), symmetric.end());

  const auto freqs = bohr_frequencies(model);
  std::vector<std::size_t> label(freqs.size(), 0);
  for (std::size_t f = 0; f < freqs.size(); ++f) {
    const double w = freqs[f].value;
    std::size_t best = 0;
    for (std::size_t c = 1; c < symmetric.size(); ++c) {
      const double d = std::abs(w - symmetric[c]);
      const double d_best = std::abs(w - symmetric[best]);
      if (d < d_best || (d == d_best && std::abs(symmetric[c]) < std::abs(symmetric[best]))) {
        best = c;
      }
    }
    label[f] = best;
  }
  return partition_from_labels(model, freqs, label, symmetric);
}

double default_epsilon(const std::vector<BathSpec>& baths) {
  double scale = 0.0;
  for (const auto& b : baths) scale = std::max(scale, b.ohmic_a * b.temperature);
  return 10.0 * scale;
}

std::vector<std::vector<Eigen::MatrixXd>> jump_operators(const CheckedModel& model,
                                                         const ClusterPartition& partition) {
  const std::size_t n = model.levels();
  if (partition.levels() != n) throw ModelError("partition does not match the model");
  const auto& couplings = model.system().couplings;
  std::vector<std::vector<Eigen::MatrixXd>> out(couplings.size());
  for (std::size_t k = 0; k < couplings.size(); ++k) {
    const auto& s = couplings[k].matrix;
    out[k].assign(partition.clusters().size(), Eigen::MatrixXd::Zero(n, n));
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) {
        out[k][partition.cluster_of(a, b)](b, a) = s(b, a);
      }
    }
  }
  return out;
}

}  // namespace qfcs
