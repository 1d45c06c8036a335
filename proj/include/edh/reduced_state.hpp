#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Core>

#include "edh/hamiltonian.hpp"
#include "edh/spectral.hpp"

namespace edh {

/// Particle reduced density matrix, rho(i-1, j-1) = <Psi| a_j^dag a_i |Psi>.
struct ReducedDensityMatrix {
  Eigen::MatrixXd entries;

  int L() const { return static_cast<int>(entries.rows()); }
  double operator()(int i, int j) const { return entries(i - 1, j - 1); }

  /// Throws ValidationError unless trace = 1 (1e-10), symmetric (1e-12) and
  /// PSD (min eigenvalue >= -1e-10).
  void check_invariants() const;
  double purity() const { return entries.squaredNorm(); }
};

struct CoherenceRecord {
  std::size_t index = 0;
  double energy = 0.0;
  double coherence_length = 0.0;
  bool outlier = false;
};

/// |rho(ref_site, j)| for j = 1..L.
struct CorrelationRow {
  /// Eigenstate index, or -1 for the average over all eigenstates.
  long state_index = 0;
  int ref_site = 1;
  std::vector<double> values;
};

inline constexpr long kAverageRow = -1;

/// Tolerance on |psi| - 1 accepted by the partial trace.
inline constexpr double kNormTolerance = 1e-8;

ReducedDensityMatrix reduced_density_matrix(const FockBasis& basis, const Eigen::Ref<const Eigen::VectorXd>& psi);
ReducedDensityMatrix reduced_density_matrix(const ManyBodyState& psi);

/// sqrt(2 sum |rho_ij|^2 (j-i)^2 / sum |rho_ij|^2), in lattice spacings.
double coherence_length(const ReducedDensityMatrix& rho);

CorrelationRow correlation_row(const FockBasis& basis, const Eigen::Ref<const Eigen::VectorXd>& psi, int ref_site);

/// Row of |rho(ref, j)| averaged over every eigenstate.
CorrelationRow average_correlation_row(const FockBasis& basis, const EigenDecomposition& decomp, int ref_site);

/// One record per eigenstate in energy order; outlier flags left clear.
/// Parallel over eigenstates, each writing its own slot.
std::vector<CoherenceRecord> spectrum_coherence_profile(const FockBasis& basis, const EigenDecomposition& decomp);

namespace reference {

/// Element-by-element partial trace and coherence sum, serial.
std::vector<CoherenceRecord> spectrum_coherence_profile(const FockBasis& basis, const EigenDecomposition& decomp);

}  // namespace reference

}  // namespace edh
