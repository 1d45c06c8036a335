#include <doctest.h>

#include <algorithm>
#include <bit>

#include <omp.h>

#include <Eigen/Eigenvalues>

#include "edh/freefermion.hpp"
#include "edh/hamiltonian.hpp"
#include "oracles.hpp"

using namespace edh;

namespace {

Eigen::VectorXd sorted_eigenvalues(const Eigen::MatrixXd& a) {
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(a, Eigen::EigenvaluesOnly).eigenvalues();
}

}  // namespace

TEST_CASE("two-site free fermion: eigenvalues -1, -1, 1, 1") {
  const FockBasis b({2, 1, 1.0, 0.0, 0.0, 0.0});
  const auto ev = sorted_eigenvalues(assemble_hamiltonian(b).to_dense());
  // Two decoupled 2x2 hopping blocks [[0,-1],[-1,0]].
  const double expected[] = {-1, -1, 1, 1};
  for (int i = 0; i < 4; ++i) CHECK(ev[i] == doctest::Approx(expected[i]).epsilon(1e-14));
}

TEST_CASE("contact-only Hamiltonian is diagonal with U on shared sites") {
  const FockBasis b({4, 2, 0.0, 0.0, 2.5, 0.0});
  const auto h = assemble_hamiltonian(b);
  CHECK(h.off_diagonal.empty());
  for (std::size_t k = 0; k < b.dimension(); ++k)
    CHECK(h.diagonal[k] == (occupied(b.mask_of(k), b.site_of(k)) ? 2.5 : 0.0));
}

TEST_CASE("stored form is upper triangular and the dense matrix symmetric") {
  const FockBasis b({5, 2, 1.0, 0.3, 1.0, 0.1});
  const auto h = assemble_hamiltonian(b);
  for (const auto& e : h.off_diagonal) CHECK(e.row < e.col);
  const auto d = h.to_dense();
  CHECK(d == d.transpose());
  CHECK(h.off_diagonal.size() <= b.dimension() * (b.L() - 1) * 2);
}

TEST_CASE("assembled matrix matches the Jordan-Wigner operator construction") {
  const ModelParams cases[] = {
      {2, 1, 1.0, 0.0, 0.0, 0.0},       {3, 1, 1.0, 0.2, 1.0, 0.0},  {4, 2, 1.0, 0.2, 1.0, 0.1},
      {5, 2, 0.7, 0.3, 2.0, 0.4},       {5, 3, 1.0, 0.2, 1.0, 0.0},  {4, 2, 1.0, 0.2, 1.0, 0.1, 0.35},
      {5, 3, 1.0, 0.0, 1.5, 0.0, 0.5},
  };
  for (const auto& p : cases) {
    CAPTURE(describe(p));
    const FockBasis b(p);
    const Eigen::MatrixXd ours = assemble_hamiltonian(b).to_dense();
    const Eigen::MatrixXd ref = oracle::dense_hamiltonian(p);
    CHECK((ours - ref).cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("next-nearest hopping signs reproduce the free-fermion many-body spectrum") {
  // Jp = U = 0: many-body levels are sums of N single-particle levels of the
  // chain with hoppings -J (range 1) and -Jnn (range 2), each times L particle copies.
  const int L = 6, N = 3;
  ModelParams p{L, N, 1.0, 0.0, 0.0, 0.0, 0.45};
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(L, L);
  for (int i = 0; i + 1 < L; ++i) t(i, i + 1) = t(i + 1, i) = -p.J;
  for (int i = 0; i + 2 < L; ++i) t(i, i + 2) = t(i + 2, i) = -p.Jnn;
  const Eigen::VectorXd e1 = sorted_eigenvalues(t);
  std::vector<double> sums;
  for (std::uint32_t m = 0; m < (1u << L); ++m) {
    if (std::popcount(m) != N) continue;
    double s = 0;
    for (int i = 0; i < L; ++i)
      if ((m >> i) & 1) s += e1[i];
    for (int copy = 0; copy < L; ++copy) sums.push_back(s);
  }
  std::sort(sums.begin(), sums.end());
  const auto ev = sorted_eigenvalues(assemble_hamiltonian(FockBasis(p)).to_dense());
  for (std::size_t i = 0; i < sums.size(); ++i) CHECK(ev[static_cast<Eigen::Index>(i)] == doctest::Approx(sums[i]).epsilon(1e-12));
}

TEST_CASE("apply on basis vectors with a contact-only Hamiltonian") {
  const FockBasis b({3, 1, 0.0, 0.0, 1.7, 0.0});
  Eigen::VectorXd v = Eigen::VectorXd::Zero(b.dimension());
  v[b.index_of(1, 0b010)] = 1.0;  // particle at 1, fermion at 2
  CHECK(apply_hamiltonian(b, v).norm() == 0.0);
  v.setZero();
  v[b.index_of(1, 0b001)] = 1.0;  // both at site 1
  CHECK((apply_hamiltonian(b, v) - 1.7 * v).norm() == 0.0);
}

TEST_CASE("matrix-free product agrees with the assembled matrix on random unit vectors") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 2.0);
  for (int trial = 0; trial < 100; ++trial) {
    const int L = 2 + trial % 5;
    ModelParams p{L, 1 + trial % L, 1.0, u(rng) / 4, u(rng), u(rng) / 5};
    const FockBasis b(p);
    const auto h = assemble_hamiltonian(b);
    const Eigen::VectorXd v = oracle::random_unit(b.dimension(), rng);
    const Eigen::VectorXd ref = h.to_dense() * v;
    CHECK((apply_hamiltonian(b, v) - ref).norm() <= 1e-12);
    CHECK((reference::multiply(h, v) - ref).norm() <= 1e-12);
    CHECK((multiply(h, v) - ref).norm() <= 1e-12);
  }
}

TEST_CASE("reflection leaves the unbiased Hamiltonian invariant entrywise") {
  for (double eps : {0.0, 0.1}) {
    const FockBasis b({6, 3, 1.0, 0.2, 1.0, eps});
    const auto perm = reflection_permutation(b);
    const Eigen::MatrixXd h = assemble_hamiltonian(b).to_dense();
    Eigen::MatrixXd r(h.rows(), h.cols());
    for (Eigen::Index i = 0; i < h.rows(); ++i)
      for (Eigen::Index j = 0; j < h.cols(); ++j) r(i, j) = h(perm[i], perm[j]);
    if (eps == 0.0)
      CHECK(r == h);
    else
      CHECK(r != h);
  }
}

TEST_CASE("no coupling crosses fermion-number sectors") {
  const FockBasis b({6, 3, 1.0, 0.2, 1.0, 0.1});
  for (const auto& e : assemble_hamiltonian(b).off_diagonal)
    CHECK(std::popcount(b.mask_of(e.row)) == std::popcount(b.mask_of(e.col)));
}

TEST_CASE("dimension mismatch is rejected") {
  const FockBasis b({4, 2});
  CHECK_THROWS_AS(apply_hamiltonian(b, Eigen::VectorXd::Zero(5)), ValidationError);
  CHECK_THROWS_AS(reference::multiply(assemble_hamiltonian(b), Eigen::VectorXd::Zero(5)), ValidationError);
}

TEST_CASE("assembly is independent of the worker count") {
  const FockBasis b({8, 4, 1.0, 0.2, 1.0, 0.1});
  const int saved = omp_get_max_threads();
  omp_set_num_threads(1);
  const auto one = assemble_hamiltonian(b);
  omp_set_num_threads(4);
  const auto four = assemble_hamiltonian(b);
  omp_set_num_threads(saved);
  REQUIRE(one.off_diagonal.size() == four.off_diagonal.size());
  CHECK(one.diagonal == four.diagonal);
  for (std::size_t i = 0; i < one.off_diagonal.size(); ++i) {
    CHECK(one.off_diagonal[i].row == four.off_diagonal[i].row);
    CHECK(one.off_diagonal[i].col == four.off_diagonal[i].col);
    CHECK(one.off_diagonal[i].value == four.off_diagonal[i].value);
  }
}
