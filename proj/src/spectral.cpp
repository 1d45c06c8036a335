#include "edh/spectral.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>

namespace edh {

void fix_sign_gauge(Eigen::MatrixXd& vectors) {
#pragma omp parallel for schedule(static)
  for (Eigen::Index c = 0; c < vectors.cols(); ++c) {
    Eigen::Index arg = 0;
    double best = -1.0;
    for (Eigen::Index r = 0; r < vectors.rows(); ++r) {
      const double a = std::abs(vectors(r, c));
      if (a > best) {
        best = a;
        arg = r;
      }
    }
    if (vectors(arg, c) < 0.0) vectors.col(c) *= -1.0;
  }
}

std::vector<std::pair<std::size_t, std::size_t>> find_near_degenerate(const Eigen::VectorXd& energies, double gap) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  if (energies.size() < 2) return out;
  const double range = energies[energies.size() - 1] - energies[0];
  const double threshold = gap * std::max(range, 1e-300);
  for (Eigen::Index k = 0; k + 1 < energies.size(); ++k)
    if (energies[k + 1] - energies[k] < threshold)
      out.emplace_back(static_cast<std::size_t>(k), static_cast<std::size_t>(k + 1));
  return out;
}

EigenDecomposition full_diagonalize_dense(Eigen::MatrixXd a, const SpectralOptions& options) {
  const Eigen::Index n = a.rows();
  if (a.cols() != n) throw ValidationError("matrix must be square");
  if (static_cast<std::size_t>(n) > options.dimension_cap)
    throw ValidationError("dimension " + std::to_string(n) + " exceeds the solver cap " +
                          std::to_string(options.dimension_cap));
  EigenDecomposition out;
  if (n == 0) return out;
  if (!a.allFinite()) throw ValidationError("matrix has non-finite entries");

  out.energies.resize(n);
  out.vectors.resize(n, n);
  std::vector<lapack_int> support(2 * static_cast<std::size_t>(n));
  lapack_int found = 0;
  const lapack_int info =
      LAPACKE_dsyevr(LAPACK_COL_MAJOR, 'V', 'A', 'U', static_cast<lapack_int>(n), a.data(), static_cast<lapack_int>(n),
                     0.0, 0.0, 0, 0, 0.0, &found, out.energies.data(), out.vectors.data(),
                     static_cast<lapack_int>(n), support.data());
  if (info < 0) throw SolverError("dsyevr: illegal argument " + std::to_string(-info), -info);
  if (info > 0) throw SolverError("dsyevr failed to converge at index " + std::to_string(info), info);
  if (found != n) throw SolverError("dsyevr returned " + std::to_string(found) + " of " + std::to_string(n) + " eigenpairs");

  fix_sign_gauge(out.vectors);
  out.near_degenerate = find_near_degenerate(out.energies);
  return out;
}

EigenDecomposition full_diagonalize(const SparseHamiltonian& h, const SpectralOptions& options) {
  if (h.dimension > options.dimension_cap)
    throw ValidationError("dimension " + std::to_string(h.dimension) + " exceeds the solver cap " +
                          std::to_string(options.dimension_cap));
  for (double d : h.diagonal)
    if (!std::isfinite(d)) throw ValidationError("Hamiltonian has non-finite entries");
  for (const auto& e : h.off_diagonal)
    if (!std::isfinite(e.value)) throw ValidationError("Hamiltonian has non-finite entries");

  EigenDecomposition out = full_diagonalize_dense(h.to_dense(), options);
  if (options.verify_residuals) {
    const auto r = residual_report(h, out);
    out.residual_bound = r.empty() ? 0.0 : *std::max_element(r.begin(), r.end());
  }
  return out;
}

std::vector<double> residual_report(const SparseHamiltonian& h, const EigenDecomposition& decomp) {
  if (static_cast<std::size_t>(decomp.vectors.rows()) != h.dimension)
    throw ValidationError("decomposition does not match Hamiltonian dimension");
  std::vector<double> out(decomp.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::size_t k = 0; k < out.size(); ++k) {
    const auto v = decomp.state(k);
    out[k] = (reference::multiply(h, v) - decomp.energies[static_cast<Eigen::Index>(k)] * v).norm();
  }
  return out;
}

std::vector<double> residual_report(const FockBasis& basis, const EigenDecomposition& decomp) {
  if (static_cast<std::size_t>(decomp.vectors.rows()) != basis.dimension())
    throw ValidationError("decomposition does not match basis dimension");
  std::vector<double> out(decomp.size());
  for (std::size_t k = 0; k < out.size(); ++k) {
    const auto v = decomp.state(k);
    out[k] = (apply_hamiltonian(basis, v) - decomp.energies[static_cast<Eigen::Index>(k)] * v).norm();
  }
  return out;
}

}  // namespace edh
