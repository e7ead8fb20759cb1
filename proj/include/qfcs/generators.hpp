// generators.hpp: counting-field-dressed Liouvillians L(chi) in superoperator form.
//
// The density matrix is vectorized over a BasisOrdering: populations (a, a)
// first, then the retained coherences in lexicographic order. All three
// builders share one elementwise template,
//
//   d rho_ab/dt = -i w_ab rho_ab
//               + sum g~ (S rho S'^T)_ab                    (sandwich, dressed)
//               - 1/2 sum (g_left S'^T S rho + g_right rho S'^T S)_ab,
//
// and differ only in which operator pairs (S, S') appear and at which
// frequency their rates are evaluated.
#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "qfcs/model.hpp"
#include "qfcs/rates.hpp"

namespace qfcs {

enum class Method { kUnified, kSecular, kRedfield };

std::string_view to_string(Method method);
/// Parses "unified", "secular" or "redfield"; throws std::invalid_argument.
Method parse_method(std::string_view name);
inline constexpr Method kAllMethods[] = {Method::kRedfield, Method::kUnified, Method::kSecular};

/// Ordered set of retained density-matrix elements.
class BasisOrdering {
 public:
  /// Populations of all `levels` followed by `coherences`, which are sorted
  /// and must come in conjugate pairs.
  BasisOrdering(std::size_t levels, std::vector<LevelPair> coherences);

  std::size_t size() const { return entries_.size(); }
  std::size_t levels() const { return levels_; }
  const std::vector<LevelPair>& entries() const { return entries_; }
  const LevelPair& operator[](std::size_t k) const { return entries_[k]; }
  /// Position of (a, b), or nullopt when not retained.
  std::optional<std::size_t> index_of(std::size_t a, std::size_t b) const;
  /// Position of the conjugate partner of entry k.
  std::size_t conjugate(std::size_t k) const;
  /// Trace functional: 1 on populations, 0 on coherences.
  Eigen::RowVectorXcd trace_functional() const;

  friend bool operator==(const BasisOrdering& x, const BasisOrdering& y) {
    return x.entries_ == y.entries_;
  }

 private:
  std::size_t levels_;
  std::vector<LevelPair> entries_;
  std::vector<std::ptrdiff_t> lookup_;  // a * N + b -> position or -1
};

/// Populations plus coherences whose Bohr frequency sits in the zero cluster.
BasisOrdering reduced_basis(const CheckedModel& model, const ClusterPartition& partition);

/// One complex counting parameter per bath, in bath order.
using CountingField = std::vector<std::complex<double>>;

CountingField zero_field(const CheckedModel& model);
/// chi_j -> -chi_j - i beta_j for every bath.
CountingField shifted_field(const CheckedModel& model, const CountingField& chi);
/// Field counting only bath `bath` with parameter `chi`.
CountingField single_bath_field(const CheckedModel& model, std::size_t bath,
                                std::complex<double> chi);

struct TiltedGenerator {
  Eigen::MatrixXcd matrix;
  BasisOrdering ordering;
  Method method;
  CountingField chi;
  /// Largest |L| entry coupling a dropped element into a retained one. Zero
  /// when the retained block is exactly invariant.
  double leakage = 0.0;
};

/// A validated model with its frequency partition and retained basis: every
/// builder input except the method and the counting field.
struct OpenSystem {
  CheckedModel model;
  ClusterPartition partition;
  BasisOrdering basis;

  /// Uses reduced_basis(model, partition) for the basis.
  OpenSystem(CheckedModel m, ClusterPartition p);
  OpenSystem(CheckedModel m, ClusterPartition p, BasisOrdering b);

  OpenSystem with_temperatures(const std::vector<double>& temperatures) const;
};

TiltedGenerator build_unified(const CheckedModel& model, const ClusterPartition& partition,
                              const CountingField& chi, const BasisOrdering& basis);
/// Unified builder on the singleton (epsilon = 0) partition.
TiltedGenerator build_secular(const CheckedModel& model, const CountingField& chi,
                              const BasisOrdering& basis);
/// Redfield builder: rates at each jump's exact Bohr frequency, cross terms
/// between frequencies w != w' kept. The sandwich rate is
/// 1/2 [e^{-i w chi} g(w) + e^{-i w' chi} g(w')]; the anticommutator carries
/// g(w)/2 on the left product and g(w')/2 on the right product.
TiltedGenerator build_redfield(const CheckedModel& model, const CountingField& chi,
                               const BasisOrdering& basis);

TiltedGenerator build_generator(const OpenSystem& system, Method method,
                                const CountingField& chi);

/// n-th derivative of L with respect to (i chi_bath) at chi = 0, from the
/// analytic phase factors. order >= 1.
Eigen::MatrixXcd generator_derivative(const OpenSystem& system, Method method,
                                      std::size_t bath, int order = 1);

}  // namespace qfcs
