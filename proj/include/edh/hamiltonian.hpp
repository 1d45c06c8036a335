#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Core>

#include "edh/fock_basis.hpp"

namespace edh {

/// Real amplitudes over a FockBasis. The model Hamiltonian is real symmetric so
/// real eigenvectors span every eigenspace.
struct ManyBodyState {
  const FockBasis* basis = nullptr;
  Eigen::VectorXd amplitudes;

  double norm() const { return amplitudes.norm(); }
};

/// Upper-triangular storage of a real symmetric matrix: full diagonal plus
/// (row, col, value) with row < col.
struct SparseHamiltonian {
  struct Entry {
    std::size_t row;
    std::size_t col;
    double value;
  };

  std::size_t dimension = 0;
  std::vector<double> diagonal;
  std::vector<Entry> off_diagonal;

  /// Infinity-norm bound on the spectral radius (max absolute row sum).
  double norm_bound() const;
  double trace() const;
  Eigen::MatrixXd to_dense() const;
};

/// Diagonal element of basis state k: contact energy plus fermionic bias.
double diagonal_element(const FockBasis& basis, std::size_t k);

/// Calls fn(column, value) for every nonzero off-diagonal element in row k,
/// both above and below the diagonal. Fermion hops carry the Jordan-Wigner
/// sign for ascending-site operator ordering.
template <class Fn>
void for_each_coupling(const FockBasis& basis, std::size_t k, Fn&& fn) {
  const ModelParams& p = basis.params();
  const int site = basis.site_of(k);
  const Mask m = basis.mask_of(k);
  const std::size_t block = static_cast<std::size_t>(site - 1) * basis.sector_size();

  auto hop = [&](int a, int b, double amplitude) {
    if (amplitude == 0.0 || occupied(m, a) == occupied(m, b)) return;
    const Mask moved = m ^ ((Mask{1} << (a - 1)) | (Mask{1} << (b - 1)));
    const double sign = (occupied_between(m, a, b) % 2) ? -1.0 : 1.0;
    fn(block + basis.rank_of(moved), -amplitude * sign);
  };
  for (int i = 1; i < p.L; ++i) hop(i, i + 1, p.J);
  for (int i = 1; i + 2 <= p.L; ++i) hop(i, i + 2, p.Jnn);

  if (p.Jp != 0.0) {
    const std::size_t stride = basis.sector_size();
    if (site > 1) fn(k - stride, -p.Jp);
    if (site < p.L) fn(k + stride, -p.Jp);
  }
}

/// Builds the sparse matrix; rows are generated in parallel and merged in row order.
SparseHamiltonian assemble_hamiltonian(const FockBasis& basis);

/// Matrix-free H * v, parallel over rows.
Eigen::VectorXd apply_hamiltonian(const FockBasis& basis, const Eigen::Ref<const Eigen::VectorXd>& v);
ManyBodyState apply_hamiltonian(const ManyBodyState& state);

/// H * v from the stored upper-triangular entries, parallel over rows of a CSR copy.
Eigen::VectorXd multiply(const SparseHamiltonian& h, const Eigen::Ref<const Eigen::VectorXd>& v);

namespace reference {

/// Serial scatter over stored triplets. Kept as the oracle for the parallel kernels.
Eigen::VectorXd multiply(const SparseHamiltonian& h, const Eigen::Ref<const Eigen::VectorXd>& v);

}  // namespace reference

}  // namespace edh
