#pragma once

// Test-only reference constructions. Nothing here calls into the library's
// basis ordering or coupling generator, so agreement is an independent check.

#include <bit>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "edh/model.hpp"

namespace oracle {

/// (site, mask) labels in site-major, mask-ascending order, by exhaustive scan.
inline std::vector<std::pair<int, std::uint32_t>> labels(int L, int N) {
  std::vector<std::uint32_t> masks;
  for (std::uint32_t m = 0; m < (1u << L); ++m)
    if (std::popcount(m) == N) masks.push_back(m);
  std::vector<std::pair<int, std::uint32_t>> out;
  for (int s = 1; s <= L; ++s)
    for (auto m : masks) out.emplace_back(s, m);
  return out;
}

/// Annihilator c_i on the 2^L fermion Fock space, states |m> = prod_{x ascending} c_x^dag |0>.
inline Eigen::MatrixXd annihilator(int L, int site) {
  const int dim = 1 << L;
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(dim, dim);
  for (int m = 0; m < dim; ++m) {
    if (!((m >> (site - 1)) & 1)) continue;
    int before = 0;
    for (int x = 1; x < site; ++x) before += (m >> (x - 1)) & 1;
    c(m ^ (1 << (site - 1)), m) = (before % 2) ? -1.0 : 1.0;
  }
  return c;
}

/// Full model Hamiltonian from operator algebra, projected on the (L, N) sector.
inline Eigen::MatrixXd dense_hamiltonian(const edh::ModelParams& p) {
  const int L = p.L;
  const int F = 1 << L;
  std::vector<Eigen::MatrixXd> c;
  for (int i = 1; i <= L; ++i) c.push_back(annihilator(L, i));
  auto cd = [&](int i) { return Eigen::MatrixXd(c[i - 1].transpose()); };
  auto n = [&](int i) { return Eigen::MatrixXd(cd(i) * c[i - 1]); };

  Eigen::MatrixXd hf = Eigen::MatrixXd::Zero(F, F);
  for (int i = 1; i < L; ++i) {
    const Eigen::MatrixXd t = cd(i) * c[i];
    hf -= p.J * (t + t.transpose());
  }
  for (int i = 1; i + 2 <= L; ++i) {
    const Eigen::MatrixXd t = cd(i) * c[i + 1];
    hf -= p.Jnn * (t + t.transpose());
  }
  for (int j = 1; j <= L; ++j) hf += p.eps * (double(j) / L) * n(j);

  Eigen::MatrixXd full = Eigen::MatrixXd::Zero(L * F, L * F);
  for (int s = 1; s <= L; ++s) {
    full.block((s - 1) * F, (s - 1) * F, F, F) = hf + p.U * n(s);
    if (s < L) {
      full.block((s - 1) * F, s * F, F, F) -= p.Jp * Eigen::MatrixXd::Identity(F, F);
      full.block(s * F, (s - 1) * F, F, F) -= p.Jp * Eigen::MatrixXd::Identity(F, F);
    }
  }
  const auto lab = labels(L, p.N);
  Eigen::MatrixXd out(lab.size(), lab.size());
  for (std::size_t a = 0; a < lab.size(); ++a)
    for (std::size_t b = 0; b < lab.size(); ++b)
      out(a, b) = full((lab[a].first - 1) * F + lab[a].second, (lab[b].first - 1) * F + lab[b].second);
  return out;
}

/// Partial trace of |psi><psi| over the fermions via the explicit outer product.
inline Eigen::MatrixXd partial_trace(int L, int N, const Eigen::VectorXd& psi) {
  const auto lab = labels(L, N);
  const Eigen::MatrixXd outer = psi * psi.transpose();
  Eigen::MatrixXd rho = Eigen::MatrixXd::Zero(L, L);
  for (std::size_t a = 0; a < lab.size(); ++a)
    for (std::size_t b = 0; b < lab.size(); ++b)
      if (lab[a].second == lab[b].second) rho(lab[a].first - 1, lab[b].first - 1) += outer(a, b);
  return rho;
}

/// Coherence length by the defining double sum.
inline double coherence_length(const Eigen::MatrixXd& rho) {
  double num = 0, den = 0;
  for (int i = 0; i < rho.rows(); ++i)
    for (int j = 0; j < rho.cols(); ++j) {
      num += rho(i, j) * rho(i, j) * (j - i) * (j - i);
      den += rho(i, j) * rho(i, j);
    }
  return std::sqrt(2 * num / den);
}

inline Eigen::VectorXd random_unit(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::VectorXd v(static_cast<Eigen::Index>(n));
  for (auto& x : v) x = g(rng);
  return v.normalized();
}

}  // namespace oracle
