#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "edh/spectral.hpp"
#include "oracles.hpp"

using namespace edh;

TEST_CASE("2x2 hopping matrix") {
  Eigen::MatrixXd a(2, 2);
  a << 0, -1, -1, 0;
  const auto d = full_diagonalize_dense(a);
  CHECK(d.energies[0] == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(d.energies[1] == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("model at L=2, N=1, U=0 gives -1, -1, 1, 1") {
  const FockBasis b({2, 1, 1.0, 0.0, 0.0, 0.0});
  const auto d = full_diagonalize(assemble_hamiltonian(b));
  const double expected[] = {-1, -1, 1, 1};
  for (int i = 0; i < 4; ++i) CHECK(d.energies[i] == doctest::Approx(expected[i]).epsilon(1e-14));
  CHECK(d.near_degenerate.size() == 2);
}

TEST_CASE("trace equals the sum of eigenvalues for random sparse symmetric inputs") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g;
  std::uniform_int_distribution<std::size_t> pick(0, 59);
  for (int trial = 0; trial < 10; ++trial) {
    SparseHamiltonian h;
    h.dimension = 60;
    for (int i = 0; i < 60; ++i) h.diagonal.push_back(g(rng));
    for (int e = 0; e < 150; ++e) {
      std::size_t r = pick(rng), c = pick(rng);
      if (r == c) continue;
      h.off_diagonal.push_back({std::min(r, c), std::max(r, c), g(rng)});
    }
    const auto d = full_diagonalize(h);
    CHECK(std::abs(d.energies.sum() - h.trace()) <= 1e-9 * 60);
  }
}

TEST_CASE("orthonormality, completeness and sorted energies at dim 245") {
  const FockBasis b({7, 3, 1.0, 0.2, 1.0, 0.0});
  const auto d = full_diagonalize(assemble_hamiltonian(b));
  const auto n = static_cast<Eigen::Index>(b.dimension());
  const Eigen::MatrixXd gram = d.vectors.transpose() * d.vectors;
  CHECK((gram - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() <= 1e-10);
  const Eigen::MatrixXd outer = d.vectors * d.vectors.transpose();
  CHECK((outer - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() <= 1e-8);
  for (Eigen::Index k = 1; k < n; ++k) CHECK(d.energies[k] >= d.energies[k - 1]);
  CHECK(d.residual_bound <= 1e-9 * d.spectral_range());
}

TEST_CASE("sign gauge makes the largest component positive") {
  const FockBasis b({5, 2, 1.0, 0.2, 1.0, 0.1});
  const auto d = full_diagonalize(assemble_hamiltonian(b));
  for (Eigen::Index c = 0; c < d.vectors.cols(); ++c) {
    Eigen::Index arg;
    d.vectors.col(c).cwiseAbs().maxCoeff(&arg);
    CHECK(d.vectors(arg, c) > 0.0);
  }
}

TEST_CASE("residual report") {
  const FockBasis b({6, 3, 1.0, 0.2, 1.0, 0.0});
  const auto h = assemble_hamiltonian(b);
  const auto d = full_diagonalize(h);

  SUBCASE("exact eigenpairs give residuals at rounding level") {
    Eigen::MatrixXd diag = Eigen::Vector3d(1.0, -2.0, 0.5).asDiagonal();
    const auto dd = full_diagonalize_dense(diag);
    SparseHamiltonian hd{3, {1.0, -2.0, 0.5}, {}};
    for (double r : residual_report(hd, dd)) CHECK(r <= 1e-12);
    for (double r : residual_report(h, d)) CHECK(r <= 1e-12);
  }
  SUBCASE("matrix-free and stored-matrix reports agree") {
    const auto a = residual_report(h, d);
    const auto m = residual_report(b, d);
    for (std::size_t k = 0; k < a.size(); ++k) CHECK(std::abs(a[k] - m[k]) <= 1e-12);
  }
  SUBCASE("residual grows linearly with a small perturbation") {
    std::mt19937_64 rng(3);
    const Eigen::VectorXd delta = oracle::random_unit(b.dimension(), rng);
    auto residual_at = [&](double t) {
      EigenDecomposition p = d;
      p.vectors.col(10) += t * delta;
      return residual_report(h, p)[10];
    };
    const double r1 = residual_at(1e-6);
    const double r2 = residual_at(2e-6);
    CHECK(r2 / r1 == doctest::Approx(2.0).epsilon(1e-3));
  }
}

TEST_CASE("L=8 half filling: all residuals within 1e-9 |H|") {
  const FockBasis b({8, 4, 1.0, 0.2, 1.0, 0.0});
  const auto h = assemble_hamiltonian(b);
  const auto d = full_diagonalize(h);
  const double bound = 1e-9 * h.norm_bound();
  for (double r : residual_report(b, d)) CHECK(r <= bound);
}

TEST_CASE("unbiased spectrum is invariant under reflection") {
  const FockBasis b({6, 3, 1.0, 0.2, 1.0, 0.0});
  const auto perm = reflection_permutation(b);
  const Eigen::MatrixXd h = assemble_hamiltonian(b).to_dense();
  Eigen::MatrixXd r(h.rows(), h.cols());
  for (Eigen::Index i = 0; i < h.rows(); ++i)
    for (Eigen::Index j = 0; j < h.cols(); ++j) r(i, j) = h(perm[i], perm[j]);
  const auto a = full_diagonalize_dense(h);
  const auto c = full_diagonalize_dense(r);
  CHECK((a.energies - c.energies).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("dimension cap and bad input") {
  const FockBasis b({6, 3});
  SpectralOptions opt;
  opt.dimension_cap = 100;
  CHECK_THROWS_AS(full_diagonalize(assemble_hamiltonian(b), opt), ValidationError);
  SparseHamiltonian bad{2, {0.0, std::nan("")}, {}};
  CHECK_THROWS_AS(full_diagonalize(bad), ValidationError);
}

TEST_CASE("near-degenerate detection") {
  Eigen::VectorXd e(4);
  e << 0.0, 1.0, 1.0 + 1e-12, 2.0;
  const auto pairs = find_near_degenerate(e);
  REQUIRE(pairs.size() == 1);
  CHECK(pairs[0].first == 1);
}

TEST_CASE("checkpoint round trip and rejection of foreign files") {
  const ModelParams p{5, 2, 1.0, 0.2, 1.0, 0.1};
  const auto d = full_diagonalize(assemble_hamiltonian(FockBasis(p)));
  const auto path = std::filesystem::temp_directory_path() / "edh_test_roundtrip.ckpt";
  save_checkpoint(path, p, d);
  const auto ck = load_checkpoint(path);
  CHECK(ck.params == p);
  CHECK(ck.decomp.energies == d.energies);
  CHECK(ck.decomp.vectors == d.vectors);
  CHECK(ck.decomp.residual_bound == d.residual_bound);

  const auto junk = std::filesystem::temp_directory_path() / "edh_test_junk.ckpt";
  std::ofstream(junk) << "definitely not a checkpoint";
  CHECK_THROWS_AS(load_checkpoint(junk), ValidationError);
  std::filesystem::remove(path);
  std::filesystem::remove(junk);
}
