#include "qfcs/generators.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace qfcs {

std::string_view to_string(Method method) {
  switch (method) {
    case Method::kUnified:
      return "unified";
    case Method::kSecular:
      return "secular";
    case Method::kRedfield:
      return "redfield";
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  if (name == "unified") return Method::kUnified;
  if (name == "secular") return Method::kSecular;
  if (name == "redfield") return Method::kRedfield;
  throw std::invalid_argument("unknown method '" + std::string(name) + "'");
}

BasisOrdering::BasisOrdering(std::size_t levels, std::vector<LevelPair> coherences)
    : levels_(levels), lookup_(levels * levels, -1) {
  std::sort(coherences.begin(), coherences.end());
  coherences.erase(std::unique(coherences.begin(), coherences.end()), coherences.end());
  for (std::size_t a = 0; a < levels; ++a) entries_.push_back({a, a});
  for (const auto& p : coherences) {
    if (p.a >= levels || p.b >= levels) throw ModelError("coherence index out of range");
    if (p.a == p.b) throw ModelError("coherence list contains a population");
    if (!std::binary_search(coherences.begin(), coherences.end(), LevelPair{p.b, p.a})) {
      throw ModelError("coherences must be retained in conjugate pairs");
    }
    entries_.push_back(p);
  }
  for (std::size_t k = 0; k < entries_.size(); ++k) {
    lookup_[entries_[k].a * levels_ + entries_[k].b] = static_cast<std::ptrdiff_t>(k);
  }
}

std::optional<std::size_t> BasisOrdering::index_of(std::size_t a, std::size_t b) const {
  if (a >= levels_ || b >= levels_) return std::nullopt;
  const auto k = lookup_[a * levels_ + b];
  if (k < 0) return std::nullopt;
  return static_cast<std::size_t>(k);
}

std::size_t BasisOrdering::conjugate(std::size_t k) const {
  return *index_of(entries_[k].b, entries_[k].a);
}

Eigen::RowVectorXcd BasisOrdering::trace_functional() const {
  Eigen::RowVectorXcd w = Eigen::RowVectorXcd::Zero(static_cast<Eigen::Index>(size()));
  for (std::size_t a = 0; a < levels_; ++a) w(static_cast<Eigen::Index>(a)) = 1.0;
  return w;
}

BasisOrdering reduced_basis(const CheckedModel& model, const ClusterPartition& partition) {
  const std::size_t n = model.levels();
  const std::size_t zero = partition.zero_cluster();
  std::vector<LevelPair> coherences;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (a != b && partition.cluster_of(a, b) == zero) coherences.push_back({a, b});
    }
  }
  return BasisOrdering(n, std::move(coherences));
}

CountingField zero_field(const CheckedModel& model) {
  return CountingField(model.bath_count(), 0.0);
}

CountingField shifted_field(const CheckedModel& model, const CountingField& chi) {
  if (chi.size() != model.bath_count()) throw ModelError("counting field size mismatch");
  CountingField out(chi.size());
  for (std::size_t j = 0; j < chi.size(); ++j) {
    out[j] = -chi[j] - std::complex<double>(0.0, model.baths()[j].beta());
  }
  return out;
}

CountingField single_bath_field(const CheckedModel& model, std::size_t bath,
                                std::complex<double> chi) {
  auto out = zero_field(model);
  out.at(bath) = chi;
  return out;
}

OpenSystem::OpenSystem(CheckedModel m, ClusterPartition p)
    : model(std::move(m)), partition(std::move(p)), basis(reduced_basis(model, partition)) {}

OpenSystem::OpenSystem(CheckedModel m, ClusterPartition p, BasisOrdering b)
    : model(std::move(m)), partition(std::move(p)), basis(std::move(b)) {
  if (basis.levels() != model.levels() || partition.levels() != model.levels()) {
    throw ModelError("basis or partition does not match the model");
  }
}

OpenSystem OpenSystem::with_temperatures(const std::vector<double>& temperatures) const {
  return OpenSystem(model.with_temperatures(temperatures), partition, basis);
}

namespace {

// Operator pair (S, S') of one bath with the frequencies and rates at which
// each side is evaluated.
struct Channel {
  std::size_t bath;
  const Eigen::MatrixXd* s1;
  const Eigen::MatrixXd* s2;
  double w1, w2;
  double g1, g2;
};

// Sandwich coefficient for a jump releasing w into `bath` with base rate g.
using Dressing = std::function<std::complex<double>(double g, double w, std::size_t bath)>;

class Assembler {
 public:
  explicit Assembler(std::size_t levels)
      : n_(levels), full_(Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(levels * levels),
                                                 static_cast<Eigen::Index>(levels * levels))) {}

  // L[(a,b),(c,d)] += coef * A(a,c) * B(d,b), i.e. the superoperator of A rho B.
  void add_product(std::complex<double> coef, const Eigen::MatrixXd& left,
                   const Eigen::MatrixXd& right) {
    if (coef == 0.0) return;
    for (std::size_t a = 0; a < n_; ++a) {
      for (std::size_t c = 0; c < n_; ++c) {
        const double lac = left(a, c);
        if (lac == 0.0) continue;
        for (std::size_t d = 0; d < n_; ++d) {
          for (std::size_t b = 0; b < n_; ++b) {
            const double rdb = right(d, b);
            if (rdb == 0.0) continue;
            full_(idx(a, b), idx(c, d)) += coef * lac * rdb;
          }
        }
      }
    }
  }

  void add_diagonal(std::size_t a, std::size_t b, std::complex<double> value) {
    full_(idx(a, b), idx(a, b)) += value;
  }

  void add_channel(const Channel& ch, const Dressing& dress, bool with_static) {
    const auto& s1 = *ch.s1;
    const auto& s2 = *ch.s2;
    const std::complex<double> sandwich =
        0.5 * (dress(ch.g1, ch.w1, ch.bath) + dress(ch.g2, ch.w2, ch.bath));
    add_product(sandwich, s1, s2.transpose());
    if (!with_static) return;
    const Eigen::MatrixXd a = s2.transpose() * s1;
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(n_),
                                                         static_cast<Eigen::Index>(n_));
    add_product(-0.5 * ch.g1, a, id);
    add_product(-0.5 * ch.g2, id, a);
  }

  TiltedGenerator restrict_to(const BasisOrdering& basis, Method method,
                              const CountingField& chi) const {
    const auto m = static_cast<Eigen::Index>(basis.size());
    std::vector<Eigen::Index> keep(basis.size());
    std::vector<bool> kept(n_ * n_, false);
    for (std::size_t k = 0; k < basis.size(); ++k) {
      keep[k] = idx(basis[k].a, basis[k].b);
      kept[static_cast<std::size_t>(keep[k])] = true;
    }
    Eigen::MatrixXcd out(m, m);
    double leakage = 0.0;
    for (Eigen::Index r = 0; r < m; ++r) {
      for (Eigen::Index c = 0; c < m; ++c) out(r, c) = full_(keep[r], keep[c]);
      for (Eigen::Index c = 0; c < full_.cols(); ++c) {
        if (!kept[static_cast<std::size_t>(c)]) {
          leakage = std::max(leakage, std::abs(full_(keep[r], c)));
        }
      }
    }
    return TiltedGenerator{std::move(out), basis, method, chi, leakage};
  }

 private:
  Eigen::Index idx(std::size_t a, std::size_t b) const {
    return static_cast<Eigen::Index>(a * n_ + b);
  }

  std::size_t n_;
  Eigen::MatrixXcd full_;
};

void check_basis(const CheckedModel& model, const BasisOrdering& basis) {
  if (basis.levels() != model.levels()) throw ModelError("basis does not match the model");
}

bool is_zero(const Eigen::MatrixXd& m) { return (m.array() == 0.0).all(); }

// Clustered (unified/secular) assembly: one channel per (coupling, cluster).
TiltedGenerator assemble_clustered(const CheckedModel& model, const ClusterPartition& partition,
                                   const BasisOrdering& basis, Method method,
                                   const CountingField& chi, const Dressing& dress,
                                   bool with_static) {
  check_basis(model, basis);
  const auto jumps = jump_operators(model, partition);
  const auto rates = RateTable::for_partition(model.baths(), partition);
  const auto& e = model.system().energies;
  const std::size_t n = model.levels();

  Assembler asm_(n);
  if (with_static) {
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) {
        if (a != b) asm_.add_diagonal(a, b, std::complex<double>(0.0, -(e[a] - e[b])));
      }
    }
  }
  for (std::size_t k = 0; k < jumps.size(); ++k) {
    const std::size_t bath = model.coupling_bath(k);
    for (std::size_t c = 0; c < jumps[k].size(); ++c) {
      const auto& s = jumps[k][c];
      if (is_zero(s)) continue;
      const double w = partition.clusters()[c].center;
      const double g = rates.rate(bath, w);
      asm_.add_channel({bath, &s, &s, w, w, g, g}, dress, with_static);
    }
  }
  return asm_.restrict_to(basis, method, chi);
}

TiltedGenerator assemble_redfield(const CheckedModel& model, const BasisOrdering& basis,
                                  const CountingField& chi, const Dressing& dress,
                                  bool with_static) {
  check_basis(model, basis);
  const auto partition = singleton_partition(model.system());
  const auto jumps = jump_operators(model, partition);
  const auto rates = RateTable::for_partition(model.baths(), partition);
  const auto& e = model.system().energies;
  const std::size_t n = model.levels();
  const auto& clusters = partition.clusters();

  Assembler asm_(n);
  if (with_static) {
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) {
        if (a != b) asm_.add_diagonal(a, b, std::complex<double>(0.0, -(e[a] - e[b])));
      }
    }
  }
  for (std::size_t k = 0; k < jumps.size(); ++k) {
    const std::size_t bath = model.coupling_bath(k);
    for (std::size_t c1 = 0; c1 < clusters.size(); ++c1) {
      const auto& s1 = jumps[k][c1];
      if (is_zero(s1)) continue;
      const double w1 = clusters[c1].center;
      for (std::size_t c2 = 0; c2 < clusters.size(); ++c2) {
        const auto& s2 = jumps[k][c2];
        if (is_zero(s2)) continue;
        const double w2 = clusters[c2].center;
        asm_.add_channel({bath, &s1, &s2, w1, w2, rates.rate(bath, w1), rates.rate(bath, w2)},
                         dress, with_static);
      }
    }
  }
  return asm_.restrict_to(basis, Method::kRedfield, chi);
}

Dressing value_dressing(const CountingField& chi) {
  return [&chi](double g, double w, std::size_t bath) { return dress_rate(g, w, chi[bath]); };
}

void check_field(const CheckedModel& model, const CountingField& chi) {
  if (chi.size() != model.bath_count()) throw ModelError("counting field size mismatch");
}

}  // namespace

TiltedGenerator build_unified(const CheckedModel& model, const ClusterPartition& partition,
                              const CountingField& chi, const BasisOrdering& basis) {
  check_field(model, chi);
  return assemble_clustered(model, partition, basis, Method::kUnified, chi, value_dressing(chi),
                            true);
}

TiltedGenerator build_secular(const CheckedModel& model, const CountingField& chi,
                              const BasisOrdering& basis) {
  check_field(model, chi);
  return assemble_clustered(model, singleton_partition(model.system()), basis, Method::kSecular,
                            chi, value_dressing(chi), true);
}

TiltedGenerator build_redfield(const CheckedModel& model, const CountingField& chi,
                               const BasisOrdering& basis) {
  check_field(model, chi);
  return assemble_redfield(model, basis, chi, value_dressing(chi), true);
}

TiltedGenerator build_generator(const OpenSystem& system, Method method,
                                const CountingField& chi) {
  switch (method) {
    case Method::kUnified:
      return build_unified(system.model, system.partition, chi, system.basis);
    case Method::kSecular:
      return build_secular(system.model, chi, system.basis);
    case Method::kRedfield:
      return build_redfield(system.model, chi, system.basis);
  }
  throw std::invalid_argument("unknown method");
}

Eigen::MatrixXcd generator_derivative(const OpenSystem& system, Method method,
                                      std::size_t bath, int order) {
  if (order < 1) throw std::invalid_argument("derivative order must be >= 1");
  if (bath >= system.model.bath_count()) throw ModelError("bath index out of range");
  // e^{-i w chi} = e^{-w s} with s = i chi, so each s-derivative brings down -w.
  const Dressing dress = [bath, order](double g, double w, std::size_t j) {
    return j == bath ? std::complex<double>(g * std::pow(-w, order)) : 0.0;
  };
  const auto chi = zero_field(system.model);
  switch (method) {
    case Method::kUnified:
      return assemble_clustered(system.model, system.partition, system.basis, method, chi, dress,
                                false)
          .matrix;
    case Method::kSecular:
      return assemble_clustered(system.model, singleton_partition(system.model.system()),
                                system.basis, method, chi, dress, false)
          .matrix;
    case Method::kRedfield:
      return assemble_redfield(system.model, system.basis, chi, dress, false).matrix;
  }
  throw std::invalid_argument("unknown method");
}

}  // namespace qfcs
