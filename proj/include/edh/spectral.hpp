#pragma once

#include <cstddef>
#include <filesystem>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "edh/hamiltonian.hpp"

namespace edh {

/// Complete spectrum of a real symmetric Hamiltonian.
///
/// Column k of `vectors` is the eigenvector of `energies[k]`; energies ascend.
/// Each column is sign-fixed so that its largest-magnitude component (first one
/// on ties) is positive.
struct EigenDecomposition {
  Eigen::VectorXd energies;
  Eigen::MatrixXd vectors;
  /// max_k |H v_k - E_k v_k|, or a negative value when not computed.
  double residual_bound = -1.0;
  /// Adjacent pairs (k, k+1) whose gap is below 1e-10 of the spectral range.
  std::vector<std::pair<std::size_t, std::size_t>> near_degenerate;

  std::size_t size() const { return static_cast<std::size_t>(energies.size()); }
  double spectral_range() const {
    return energies.size() ? energies[energies.size() - 1] - energies[0] : 0.0;
  }
  auto state(std::size_t k) const { return vectors.col(static_cast<Eigen::Index>(k)); }
};

struct SpectralOptions {
  std::size_t dimension_cap = 20000;
  bool verify_residuals = true;
};

inline constexpr double kNearDegenerateGap = 1e-10;

/// Dense LAPACK (dsyevr, MRRR) diagonalization of the densified matrix.
EigenDecomposition full_diagonalize(const SparseHamiltonian& h, const SpectralOptions& options = {});

/// Same, starting from an already dense symmetric matrix (only the upper triangle is read).
EigenDecomposition full_diagonalize_dense(Eigen::MatrixXd a, const SpectralOptions& options = {});

/// |H v_k - E_k v_k| per eigenpair from the stored sparse matrix.
std::vector<double> residual_report(const SparseHamiltonian& h, const EigenDecomposition& decomp);

/// Same quantity recomputed through the matrix-free kernel.
std::vector<double> residual_report(const FockBasis& basis, const EigenDecomposition& decomp);

/// Pairs (k, k+1) with E_{k+1} - E_k < gap * range.
std::vector<std::pair<std::size_t, std::size_t>> find_near_degenerate(const Eigen::VectorXd& energies,
                                                                      double gap = kNearDegenerateGap);

void fix_sign_gauge(Eigen::MatrixXd& vectors);

// Binary checkpoint: 8-byte magic, u32 version, model parameters, dimension,
// energies, then column-major eigenvectors. Little-endian host layout.
inline constexpr std::uint32_t kCheckpointVersion = 1;

void save_checkpoint(const std::filesystem::path& path, const ModelParams& params, const EigenDecomposition& decomp);

struct Checkpoint {
  ModelParams params;
  EigenDecomposition decomp;
};

Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace edh
