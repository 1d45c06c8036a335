#include "edh/hamiltonian.hpp"

#include <cmath>

namespace edh {

double diagonal_element(const FockBasis& basis, std::size_t k) {
  const ModelParams& p = basis.params();
  const int site = basis.site_of(k);
  const Mask m = basis.mask_of(k);
  double d = occupied(m, site) ? p.U : 0.0;
  if (p.eps != 0.0) {
    double bias = 0.0;
    for (int j = 1; j <= p.L; ++j)
      if (occupied(m, j)) bias += static_cast<double>(j) / p.L;
    d += p.eps * bias;
  }
  return d;
}

SparseHamiltonian assemble_hamiltonian(const FockBasis& basis) {
  const std::size_t dim = basis.dimension();
  SparseHamiltonian h;
  h.dimension = dim;
  h.diagonal.resize(dim);
  std::vector<std::vector<SparseHamiltonian::Entry>> rows(dim);

#pragma omp parallel for schedule(static)
  for (std::size_t k = 0; k < dim; ++k) {
    h.diagonal[k] = diagonal_element(basis, k);
    for_each_coupling(basis, k, [&](std::size_t col, double value) {
      if (col > k) rows[k].push_back({k, col, value});
    });
  }

  std::size_t total = 0;
  for (const auto& r : rows) total += r.size();
  h.off_diagonal.reserve(total);
  for (auto& r : rows) h.off_diagonal.insert(h.off_diagonal.end(), r.begin(), r.end());
  return h;
}

Eigen::VectorXd apply_hamiltonian(const FockBasis& basis, const Eigen::Ref<const Eigen::VectorXd>& v) {
  const std::size_t dim = basis.dimension();
  if (static_cast<std::size_t>(v.size()) != dim)
    throw ValidationError("state dimension " + std::to_string(v.size()) + " does not match basis dimension " +
                          std::to_string(dim));
  Eigen::VectorXd out(static_cast<Eigen::Index>(dim));
#pragma omp parallel for schedule(static)
  for (std::size_t k = 0; k < dim; ++k) {
    double acc = diagonal_element(basis, k) * v[static_cast<Eigen::Index>(k)];
    for_each_coupling(basis, k, [&](std::size_t col, double value) { acc += value * v[static_cast<Eigen::Index>(col)]; });
    out[static_cast<Eigen::Index>(k)] = acc;
  }
  return out;
}

ManyBodyState apply_hamiltonian(const ManyBodyState& state) {
  if (state.basis == nullptr) throw ValidationError("state has no basis");
  return {state.basis, apply_hamiltonian(*state.basis, state.amplitudes)};
}

double SparseHamiltonian::norm_bound() const {
  std::vector<double> row(diagonal.size());
  for (std::size_t k = 0; k < diagonal.size(); ++k) row[k] = std::abs(diagonal[k]);
  for (const auto& e : off_diagonal) {
    row[e.row] += std::abs(e.value);
    row[e.col] += std::abs(e.value);
  }
  double m = 0.0;
  for (double r : row) m = std::max(m, r);
  return m;
}

double SparseHamiltonian::trace() const {
  double t = 0.0;
  for (double d : diagonal) t += d;
  return t;
}

Eigen::MatrixXd SparseHamiltonian::to_dense() const {
  const auto n = static_cast<Eigen::Index>(dimension);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index k = 0; k < n; ++k) a(k, k) = diagonal[static_cast<std::size_t>(k)];
  for (const auto& e : off_diagonal) {
    a(static_cast<Eigen::Index>(e.row), static_cast<Eigen::Index>(e.col)) = e.value;
    a(static_cast<Eigen::Index>(e.col), static_cast<Eigen::Index>(e.row)) = e.value;
  }
  return a;
}

Eigen::VectorXd multiply(const SparseHamiltonian& h, const Eigen::Ref<const Eigen::VectorXd>& v) {
  const std::size_t dim = h.dimension;
  if (static_cast<std::size_t>(v.size()) != dim) throw ValidationError("vector dimension mismatch");
  // Row-wise adjacency so each output element is owned by one thread.
  std::vector<std::size_t> start(dim + 1, 0);
  for (const auto& e : h.off_diagonal) {
    ++start[e.row + 1];
    ++start[e.col + 1];
  }
  for (std::size_t k = 0; k < dim; ++k) start[k + 1] += start[k];
  std::vector<std::size_t> fill(start.begin(), start.end() - 1);
  std::vector<std::pair<std::size_t, double>> adj(start[dim]);
  for (const auto& e : h.off_diagonal) {
    adj[fill[e.row]++] = {e.col, e.value};
    adj[fill[e.col]++] = {e.row, e.value};
  }
  Eigen::VectorXd out(static_cast<Eigen::Index>(dim));
#pragma omp parallel for schedule(static)
  for (std::size_t k = 0; k < dim; ++k) {
    double acc = h.diagonal[k] * v[static_cast<Eigen::Index>(k)];
    for (std::size_t q = start[k]; q < start[k + 1]; ++q)
      acc += adj[q].second * v[static_cast<Eigen::Index>(adj[q].first)];
    out[static_cast<Eigen::Index>(k)] = acc;
  }
  return out;
}

namespace reference {

Eigen::VectorXd multiply(const SparseHamiltonian& h, const Eigen::Ref<const Eigen::VectorXd>& v) {
  if (static_cast<std::size_t>(v.size()) != h.dimension) throw ValidationError("vector dimension mismatch");
  Eigen::VectorXd out(v.size());
  for (Eigen::Index k = 0; k < v.size(); ++k) out[k] = h.diagonal[static_cast<std::size_t>(k)] * v[k];
  for (const auto& e : h.off_diagonal) {
    const auto r = static_cast<Eigen::Index>(e.row);
    const auto c = static_cast<Eigen::Index>(e.col);
    out[r] += e.value * v[c];
    out[c] += e.value * v[r];
  }
  return out;
}

}  // namespace reference

}  // namespace edh
