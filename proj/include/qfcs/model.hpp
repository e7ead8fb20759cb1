// model.hpp: open-system description, Bohr frequencies and frequency clusters.
#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qfcs {

/// Raised when a model, bath set, or partition violates its invariants.
class ModelError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct BathSpec {
  std::string id;
  double temperature = 1.0;
  double ohmic_a = 0.0;

  double beta() const { return 1.0 / temperature; }
};

/// One real symmetric system operator coupled to a single bath. The coupling
/// strength lives in the bath's spectral density; the matrix is dimensionless.
struct CouplingSpec {
  std::string bath_id;
  Eigen::MatrixXd matrix;
};

struct SystemModel {
  std::vector<double> energies;  // ascending
  std::vector<CouplingSpec> couplings;

  std::size_t levels() const { return energies.size(); }
};

/// A SystemModel that passed validate_model, with couplings resolved to bath
/// indices. Construct only through validate_model.
class CheckedModel {
 public:
  const SystemModel& system() const { return system_; }
  const std::vector<BathSpec>& baths() const { return baths_; }
  std::size_t levels() const { return system_.levels(); }
  std::size_t bath_count() const { return baths_.size(); }
  /// Bath index of coupling `k`.
  std::size_t coupling_bath(std::size_t k) const { return coupling_bath_[k]; }
  std::size_t bath_index(const std::string& id) const;

  /// Same system with bath temperatures replaced (one per bath, same order).
  CheckedModel with_temperatures(const std::vector<double>& temperatures) const;

 private:
  friend CheckedModel validate_model(SystemModel model, std::vector<BathSpec> baths);
  SystemModel system_;
  std::vector<BathSpec> baths_;
  std::vector<std::size_t> coupling_bath_;
};

CheckedModel validate_model(SystemModel model, std::vector<BathSpec> baths);

struct LevelPair {
  std::size_t a = 0;
  std::size_t b = 0;

  friend bool operator==(const LevelPair&, const LevelPair&) = default;
  friend auto operator<=>(const LevelPair&, const LevelPair&) = default;
};

/// Distinct Bohr frequency E_a - E_b together with every ordered level pair
/// (a, b) that produces it.
struct BohrFrequency {
  double value = 0.0;
  std::vector<LevelPair> pairs;
};

/// Distinct Bohr frequencies in ascending order. Exact ties (within 1e-12 of
/// the spectral scale) share one entry.
std::vector<BohrFrequency> bohr_frequencies(const SystemModel& model);
inline std::vector<BohrFrequency> bohr_frequencies(const CheckedModel& model) {
  return bohr_frequencies(model.system());
}

struct Cluster {
  double center = 0.0;
  std::vector<BohrFrequency> members;
};

/// Grouping of all ordered level pairs into frequency clusters. Clusters are
/// closed under negation: the pair (b, a) sits in the mirror of the cluster
/// holding (a, b), and mirrored centers are exact negatives.
class ClusterPartition {
 public:
  /// Builds a partition from a cluster index per level pair
  /// (`assignment[a * N + b]`) and one center per cluster. Validates
  /// completeness and mirror closure.
  ClusterPartition(std::size_t levels, std::vector<double> energies,
                   std::vector<std::size_t> assignment, std::vector<double> centers);

  const std::vector<Cluster>& clusters() const { return clusters_; }
  std::size_t levels() const { return levels_; }
  std::size_t cluster_of(std::size_t a, std::size_t b) const {
    return assignment_[a * levels_ + b];
  }
  std::size_t mirror(std::size_t cluster) const { return mirror_[cluster]; }
  /// Cluster containing the zero frequency (populations).
  std::size_t zero_cluster() const { return cluster_of(0, 0); }

 private:
  std::size_t levels_;
  std::vector<std::size_t> assignment_;
  std::vector<Cluster> clusters_;
  std::vector<std::size_t> mirror_;
};

/// Single-linkage clustering of |omega| with gap threshold `epsilon`, reflected
/// to negative frequencies. Centers are member means unless `centers` is given,
/// in which case every frequency joins its nearest override center instead.
ClusterPartition cluster_frequencies(const SystemModel& model, double epsilon);
ClusterPartition partition_with_centers(const SystemModel& model,
                                        const std::vector<double>& centers);
inline ClusterPartition singleton_partition(const SystemModel& model) {
  return cluster_frequencies(model, 0.0);
}

/// 10 x the largest rate scale a_j T_j over baths.
double default_epsilon(const std::vector<BathSpec>& baths);

/// S_{k, c}: part of coupling k connecting level pairs whose Bohr frequency
/// lies in cluster c. Indexed [coupling][cluster]; element (b, a) is nonzero
/// only for pairs (a, b) assigned to c, i.e. transitions a -> b releasing
/// E_a - E_b into the bath.
std::vector<std::vector<Eigen::MatrixXd>> jump_operators(const CheckedModel& model,
                                                         const ClusterPartition& partition);

}  // namespace qfcs
