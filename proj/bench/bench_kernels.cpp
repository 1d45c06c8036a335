// Parallel kernels against their serial references.
//   bench_kernels [L] [repeats]

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <random>

#include "edh/hamiltonian.hpp"
#include "edh/reduced_state.hpp"
#include "edh/spectral.hpp"

using namespace edh;
using Clock = std::chrono::steady_clock;

template <class F>
double best_of(int repeats, F&& f) {
  double best = 1e300;
  for (int r = 0; r < repeats; ++r) {
    const auto t = Clock::now();
    f();
    best = std::min(best, std::chrono::duration<double>(Clock::now() - t).count());
  }
  return best;
}

void line(const char* kernel, double serial, double parallel, double dev) {
  std::printf("%-28s serial %10.4f ms  parallel %10.4f ms  speedup %5.2fx  max dev %.1e\n", kernel, 1e3 * serial,
              1e3 * parallel, serial / parallel, dev);
}

int main(int argc, char** argv) {
  const int L = argc > 1 ? std::atoi(argv[1]) : 10;
  const int repeats = argc > 2 ? std::atoi(argv[2]) : 5;
  const FockBasis basis({L, half_filling(L), 1.0, 0.2, 1.0, 0.0});
  std::printf("L=%d N=%d dimension %zu, %d OpenMP threads\n", L, half_filling(L), basis.dimension(),
              omp_get_max_threads());

  const auto h = assemble_hamiltonian(basis);
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g;
  Eigen::VectorXd v(basis.dimension());
  for (auto& x : v) x = g(rng);

  Eigen::VectorXd a, b, c;
  const double t_ref = best_of(repeats, [&] { a = reference::multiply(h, v); });
  const double t_csr = best_of(repeats, [&] { b = multiply(h, v); });
  const double t_free = best_of(repeats, [&] { c = apply_hamiltonian(basis, v); });
  line("H v (assembled CSR)", t_ref, t_csr, (a - b).cwiseAbs().maxCoeff());
  line("H v (matrix-free)", t_ref, t_free, (a - c).cwiseAbs().maxCoeff());

  const auto t_diag = Clock::now();
  const auto decomp = full_diagonalize(h);
  std::printf("full diagonalization %.2f s\n", std::chrono::duration<double>(Clock::now() - t_diag).count());
  std::vector<CoherenceRecord> ps, pp;
  const double t_ps = best_of(repeats, [&] { ps = reference::spectrum_coherence_profile(basis, decomp); });
  const double t_pp = best_of(repeats, [&] { pp = spectrum_coherence_profile(basis, decomp); });
  double dev = 0.0;
  for (std::size_t k = 0; k < ps.size(); ++k)
    dev = std::max(dev, std::abs(ps[k].coherence_length - pp[k].coherence_length));
  line("coherence profile", t_ps, t_pp, dev);
}
