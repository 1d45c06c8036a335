#include "edh/reduced_state.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

namespace edh {
namespace {

void check_state(const FockBasis& basis, const Eigen::Ref<const Eigen::VectorXd>& psi) {
  if (static_cast<std::size_t>(psi.size()) != basis.dimension())
    throw ValidationError("state dimension does not match basis");
  const double dev = std::abs(psi.norm() - 1.0);
  if (dev > kNormTolerance) throw ValidationError("state is not normalized (| |psi| - 1 | = " + std::to_string(dev) + ")");
}

// Site-major layout: column j of this map is the fermion block of particle site j+1.
auto site_blocks(const FockBasis& basis, const Eigen::Ref<const Eigen::VectorXd>& psi) {
  return Eigen::Map<const Eigen::MatrixXd>(psi.data(), static_cast<Eigen::Index>(basis.sector_size()), basis.L());
}

double coherence_sum(const Eigen::MatrixXd& rho) {
  double num = 0.0;
  double den = 0.0;
  for (Eigen::Index j = 0; j < rho.cols(); ++j)
    for (Eigen::Index i = 0; i < rho.rows(); ++i) {
      const double w = rho(i, j) * rho(i, j);
      const double d = static_cast<double>(j - i);
      num += w * d * d;
      den += w;
    }
  return std::sqrt(2.0 * num / den);
}

}  // namespace

void ReducedDensityMatrix::check_invariants() const {
  const double tr = entries.trace();
  if (std::abs(tr - 1.0) > 1e-10) throw ValidationError("reduced density matrix trace " + std::to_string(tr));
  if ((entries - entries.transpose()).cwiseAbs().maxCoeff() > 1e-12)
    throw ValidationError("reduced density matrix is not symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(entries, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-10) throw ValidationError("reduced density matrix is not positive semidefinite");
}

ReducedDensityMatrix reduced_density_matrix(const FockBasis& basis, const Eigen::Ref<const Eigen::VectorXd>& psi) {
  check_state(basis, psi);
  const auto blocks = site_blocks(basis, psi);
  ReducedDensityMatrix rho;
  rho.entries.noalias() = blocks.transpose() * blocks;
  // The product is symmetric up to rounding in the GEMM kernel; make it exact.
  rho.entries = 0.5 * (rho.entries + rho.entries.transpose()).eval();
  return rho;
}

ReducedDensityMatrix reduced_density_matrix(const ManyBodyState& psi) {
  if (psi.basis == nullptr) throw ValidationError("state has no basis");
  return reduced_density_matrix(*psi.basis, psi.amplitudes);
}

double coherence_length(const ReducedDensityMatrix& rho) { return coherence_sum(rho.entries); }

CorrelationRow correlation_row(const FockBasis& basis, const Eigen::Ref<const Eigen::VectorXd>& psi, int ref_site) {
  if (ref_site < 1 || ref_site > basis.L())
    throw ValidationError("reference site " + std::to_string(ref_site) + " outside 1.." + std::to_string(basis.L()));
  const auto rho = reduced_density_matrix(basis, psi);
  CorrelationRow row;
  row.ref_site = ref_site;
  row.values.resize(static_cast<std::size_t>(basis.L()));
  for (int j = 1; j <= basis.L(); ++j) row.values[static_cast<std::size_t>(j - 1)] = std::abs(rho(ref_site, j));
  return row;
}

CorrelationRow average_correlation_row(const FockBasis& basis, const EigenDecomposition& decomp, int ref_site) {
  if (ref_site < 1 || ref_site > basis.L()) throw ValidationError("reference site out of range");
  const auto L = static_cast<std::size_t>(basis.L());
  const std::size_t n = decomp.size();
  std::vector<double> rows(n * L);
#pragma omp parallel for schedule(dynamic, 32)
  for (std::size_t k = 0; k < n; ++k) {
    const auto row = correlation_row(basis, decomp.state(k), ref_site);
    std::copy(row.values.begin(), row.values.end(), rows.begin() + static_cast<std::ptrdiff_t>(k * L));
  }
  CorrelationRow avg{kAverageRow, ref_site, std::vector<double>(L, 0.0)};
  // Fixed summation order keeps the result independent of the thread count.
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t j = 0; j < L; ++j) avg.values[j] += rows[k * L + j];
  for (double& v : avg.values) v /= static_cast<double>(n);
  return avg;
}

std::vector<CoherenceRecord> spectrum_coherence_profile(const FockBasis& basis, const EigenDecomposition& decomp) {
  if (static_cast<std::size_t>(decomp.vectors.rows()) != basis.dimension())
    throw ValidationError("decomposition does not match basis dimension");
  std::vector<CoherenceRecord> out(decomp.size());
#pragma omp parallel for schedule(dynamic, 32)
  for (std::size_t k = 0; k < out.size(); ++k) {
    const auto rho = reduced_density_matrix(basis, decomp.state(k));
    out[k] = {k, decomp.energies[static_cast<Eigen::Index>(k)], coherence_length(rho), false};
  }
  return out;
}

namespace reference {

std::vector<CoherenceRecord> spectrum_coherence_profile(const FockBasis& basis, const EigenDecomposition& decomp) {
  const int L = basis.L();
  const std::size_t dim = basis.dimension();
  std::vector<CoherenceRecord> out(decomp.size());
  Eigen::MatrixXd rho(L, L);
  for (std::size_t k = 0; k < out.size(); ++k) {
    const auto psi = decomp.state(k);
    rho.setZero();
    for (std::size_t a = 0; a < dim; ++a)
      for (int j = 1; j <= L; ++j) {
        const std::size_t b = basis.index_of(j, basis.mask_of(a));
        rho(basis.site_of(a) - 1, j - 1) += psi[static_cast<Eigen::Index>(a)] * psi[static_cast<Eigen::Index>(b)];
      }
    out[k] = {k, decomp.energies[static_cast<Eigen::Index>(k)], coherence_sum(rho), false};
  }
  return out;
}

}  // namespace reference

}  // namespace edh
