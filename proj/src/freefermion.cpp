#include "edh/freefermion.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/LU>

#include "edh/reduced_state.hpp"

namespace edh {

void SingleParticleHamiltonian::validate() const {
  if (L < 1) throw ValidationError("single-particle Hamiltonian needs L >= 1");
  if (impurity_site < 1 || impurity_site > L) throw ValidationError("impurity site outside 1..L");
  if (!std::isfinite(J) || !std::isfinite(U) || !std::isfinite(eps)) throw ValidationError("couplings must be finite");
}

Eigen::VectorXd SingleParticleHamiltonian::diagonal() const {
  Eigen::VectorXd d(L);
  for (int i = 1; i <= L; ++i) d[i - 1] = eps * static_cast<double>(i) / L;
  d[impurity_site - 1] += U;
  return d;
}

Eigen::MatrixXd SingleParticleHamiltonian::dense() const {
  Eigen::MatrixXd h = diagonal().asDiagonal();
  for (int i = 0; i + 1 < L; ++i) h(i, i + 1) = h(i + 1, i) = -J;
  return h;
}

OrbitalSet single_particle_diagonalize(const SingleParticleHamiltonian& h) {
  h.validate();
  const lapack_int n = h.L;
  OrbitalSet out{h, Eigen::MatrixXd(n, n), Eigen::VectorXd(n)};
  Eigen::VectorXd d = h.diagonal();
  Eigen::VectorXd e = Eigen::VectorXd::Constant(std::max<lapack_int>(n, 1), -h.J);
  std::vector<lapack_int> support(2 * static_cast<std::size_t>(n));
  lapack_int found = 0;
  const lapack_int info = LAPACKE_dstevr(LAPACK_COL_MAJOR, 'V', 'A', n, d.data(), e.data(), 0.0, 0.0, 0, 0, 0.0,
                                         &found, out.energies.data(), out.orbitals.data(), n, support.data());
  if (info != 0) throw SolverError("dstevr failed with info " + std::to_string(info), info);
  if (found != n) throw SolverError("dstevr returned an incomplete orbital set");
  return out;
}

SlaterState::SlaterState(std::shared_ptr<const OrbitalSet> orbitals, std::vector<int> occupation)
    : orbitals_(std::move(orbitals)), occupation_(std::move(occupation)) {
  if (!orbitals_) throw ValidationError("Slater state needs an orbital set");
  std::vector<int> sorted = occupation_;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw ValidationError("Slater occupation has repeated orbitals");
  for (int m : sorted)
    if (m < 0 || m >= orbitals_->L()) throw ValidationError("Slater occupation index out of range");
}

SlaterState SlaterState::ground_state(std::shared_ptr<const OrbitalSet> orbitals, int N) {
  if (!orbitals) throw ValidationError("Slater state needs an orbital set");
  if (N < 0 || N > orbitals->L()) throw ValidationError("N outside 0..L");
  std::vector<int> occ(static_cast<std::size_t>(N));
  for (int m = 0; m < N; ++m) occ[static_cast<std::size_t>(m)] = m;
  SlaterState s(orbitals, std::move(occ));
  if (N > 0 && N < orbitals->L()) {
    const auto& e = orbitals->energies;
    const double scale = std::max(1.0, e.cwiseAbs().maxCoeff());
    s.fermi_level_tie_ = (e[N] - e[N - 1]) < 1e-12 * scale;
  }
  return s;
}

double SlaterState::energy() const {
  double sum = 0.0;
  for (int m : occupation_) sum += orbitals_->energies[m];
  return sum;
}

Eigen::MatrixXd SlaterState::occupied_orbitals() const {
  Eigen::MatrixXd a(L(), N());
  for (int b = 0; b < N(); ++b) a.col(b) = orbitals_->orbitals.col(occupation_[static_cast<std::size_t>(b)]);
  return a;
}

double slater_overlap(const SlaterState& a, const SlaterState& b) {
  if (a.L() != b.L()) throw ValidationError("Slater states live on different lattices");
  if (a.N() != b.N()) throw ValidationError("Slater states have different particle numbers");
  if (a.N() == 0) return 1.0;
  const Eigen::MatrixXd m = a.occupied_orbitals().transpose() * b.occupied_orbitals();
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(m);
  const auto& u = lu.matrixLU();
  double log_abs = 0.0;
  double sign = lu.permutationP().determinant();
  for (Eigen::Index i = 0; i < u.rows(); ++i) {
    const double p = u(i, i);
    if (p == 0.0) return 0.0;
    log_abs += std::log(std::abs(p));
    if (p < 0.0) sign = -sign;
  }
  return sign * std::exp(log_abs);
}

Eigen::VectorXd embed_slater(const SlaterState& s, const FockBasis& basis) {
  if (s.L() != basis.L() || s.N() != basis.N())
    throw ValidationError("Slater state size does not match the basis");
  const int N = s.N();
  const auto& masks = basis.masks();
  const Eigen::MatrixXd occ = s.occupied_orbitals();
  Eigen::VectorXd out(static_cast<Eigen::Index>(masks.size()));
#pragma omp parallel for schedule(static)
  for (std::size_t r = 0; r < masks.size(); ++r) {
    Eigen::MatrixXd m(N, N);
    int row = 0;
    for (int site = 1; site <= basis.L(); ++site)
      if (occupied(masks[r], site)) m.row(row++) = occ.row(site - 1);
    out[static_cast<Eigen::Index>(r)] = N == 0 ? 1.0 : m.determinant();
  }
  const double norm = out.norm();
  if (std::abs(norm - 1.0) > 1e-10) throw SolverError("embedded Slater state is not normalized");
  return out;
}

namespace {

void require_integrable_match(const FockBasis& basis, int site, const SlaterState& s) {
  const ModelParams& p = basis.params();
  const auto& src = s.orbitals().source;
  if (p.Jp != 0.0) throw ValidationError("integrable eigenstates require Jp = 0");
  if (p.Jnn != 0.0) throw ValidationError("integrable eigenstates require Jnn = 0");
  if (src.impurity_site != site)
    throw ValidationError("Slater state was built for impurity site " + std::to_string(src.impurity_site) +
                          ", not " + std::to_string(site));
  if (src.L != p.L || src.J != p.J || src.U != p.U || src.eps != p.eps)
    throw ValidationError("Slater orbitals were built with different couplings than the basis");
}

}  // namespace

ManyBodyState integrable_eigenstate(const FockBasis& basis, int site, const SlaterState& s) {
  if (site < 1 || site > basis.L()) throw ValidationError("particle site out of range");
  require_integrable_match(basis, site, s);
  ManyBodyState out{&basis, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(basis.dimension()))};
  const auto C = static_cast<Eigen::Index>(basis.sector_size());
  out.amplitudes.segment((site - 1) * C, C) = embed_slater(s, basis);
  return out;
}

ManyBodyState degenerate_superposition(const FockBasis& basis, const SlaterState& s_first, const SlaterState& s_last,
                                       double tolerance) {
  const int L = basis.L();
  if (L < 2) throw ValidationError("superposition needs L >= 2");
  require_integrable_match(basis, 1, s_first);
  require_integrable_match(basis, L, s_last);
  const double e1 = s_first.energy();
  const double eL = s_last.energy();
  if (std::abs(e1 - eL) > tolerance * std::max(1.0, std::abs(e1)))
    throw ValidationError("Slater energies differ by " + std::to_string(std::abs(e1 - eL)) +
                          ": pair is not degenerate");
  const auto C = static_cast<Eigen::Index>(basis.sector_size());
  ManyBodyState out{&basis, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(basis.dimension()))};
  out.amplitudes.segment(0, C) = embed_slater(s_first, basis) / std::numbers::sqrt2;
  out.amplitudes.segment((L - 1) * C, C) = embed_slater(s_last, basis) / std::numbers::sqrt2;
  return out;
}

double eigen_residual(const ManyBodyState& state, double energy) {
  return (apply_hamiltonian(state).amplitudes - energy * state.amplitudes).norm();
}

double printed_superposition_coherence(double g, int L) {
  if (!(g >= 0.0 && g <= 1.0)) throw ValidationError("squared overlap must lie in [0, 1]");
  return (L - 1) * g / std::sqrt(1.0 + g);
}

double direct_superposition_coherence(double g, int L) {
  if (!(g >= 0.0 && g <= 1.0)) throw ValidationError("squared overlap must lie in [0, 1]");
  return (L - 1) * std::sqrt(2.0 * g / (1.0 + g));
}

OverlapScalingResult orthogonality_scaling(const OverlapSweepSpec& spec) {
  if (spec.sizes.size() < 4) throw ValidationError("overlap sweep needs at least 4 sizes");
  if (!(spec.density > 0.0 && spec.density <= 1.0)) throw ValidationError("density must lie in (0, 1]");
  std::vector<int> sizes = spec.sizes;
  std::sort(sizes.begin(), sizes.end());
  if (std::adjacent_find(sizes.begin(), sizes.end()) != sizes.end()) throw ValidationError("repeated sweep size");
  if (sizes.front() < 2) throw ValidationError("sweep sizes must be >= 2");

  OverlapScalingResult res;
  res.points.resize(sizes.size());
  // Each point is independent; results land in fixed slots.
#pragma omp parallel for schedule(dynamic, 1)
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    const int L = sizes[i];
    const int N = static_cast<int>(std::floor(spec.density * L));
    auto first = std::make_shared<const OrbitalSet>(single_particle_diagonalize({L, spec.J, spec.U, 0.0, 1}));
    auto last = std::make_shared<const OrbitalSet>(single_particle_diagonalize({L, spec.J, spec.U, 0.0, L}));
    const auto a = SlaterState::ground_state(first, N);
    const auto b = SlaterState::ground_state(last, N);
    const double s = slater_overlap(a, b);
    const double g = std::min(1.0, s * s);
    res.points[i] = {L, N, g, printed_superposition_coherence(g, L), direct_superposition_coherence(g, L),
                     a.fermi_level_tie() || b.fermi_level_tie()};
  }

  std::vector<double> xs, gs, printed, direct;
  for (const auto& p : res.points) {
    xs.push_back(p.L);
    gs.push_back(p.overlap_squared);
    printed.push_back(p.printed_length);
    direct.push_back(p.direct_length);
  }
  res.overlap_fit = fit_power_law(xs, gs);
  res.alpha = -res.overlap_fit.slope;
  res.alpha_stderr = res.overlap_fit.slope_stderr;
  res.printed_length_fit = fit_power_law(xs, printed);
  res.direct_length_fit = fit_power_law(xs, direct);
  res.strictly_decreasing = true;
  for (std::size_t i = 1; i < gs.size(); ++i)
    if (!(gs[i] < gs[i - 1])) res.strictly_decreasing = false;

  for (int L : spec.construct_sizes) {
    ModelParams p{L, static_cast<int>(std::floor(spec.density * L)), spec.J, 0.0, spec.U, 0.0};
    const FockBasis basis(p);
    auto first = std::make_shared<const OrbitalSet>(single_particle_diagonalize(SingleParticleHamiltonian::for_site(p, 1)));
    auto last = std::make_shared<const OrbitalSet>(single_particle_diagonalize(SingleParticleHamiltonian::for_site(p, L)));
    const auto a = SlaterState::ground_state(first, p.N);
    const auto b = SlaterState::ground_state(last, p.N);
    const auto psi = degenerate_superposition(basis, a, b);
    const double s = slater_overlap(a, b);
    res.constructed.push_back({L, p.N, s * s, coherence_length(reduced_density_matrix(psi)),
                               eigen_residual(psi, a.energy())});
  }
  if (res.constructed.size() >= 2) {
    std::vector<double> cx, cy;
    for (const auto& c : res.constructed) {
      cx.push_back(c.L);
      cy.push_back(c.measured_length);
    }
    try {
      res.constructed_length_fit = fit_power_law(cx, cy);
    } catch (const std::exception&) {
      // fewer than two positive lengths
    }
  }
  return res;
}

std::optional<NodeState> node_state_construction(const FockBasis& basis, int p, int q) {
  const ModelParams& params = basis.params();
  const int L = params.L;
  if (p < 1 || p > L || q < 1 || q > L || p == q) throw ValidationError("node sites must be distinct sites in 1..L");
  if (params.Jp != 0.0 || params.eps != 0.0 || params.Jnn != 0.0)
    throw ValidationError("node-state construction requires Jp = 0, eps = 0 and Jnn = 0");

  // Free-chain mode m (1-based) vanishes at site j iff m * j is a multiple of L + 1.
  std::vector<int> modes;
  for (int m = 1; m <= L && static_cast<int>(modes.size()) < basis.N(); ++m)
    if ((m * p) % (L + 1) == 0 && (m * q) % (L + 1) == 0) modes.push_back(m);
  if (static_cast<int>(modes.size()) < basis.N()) return std::nullopt;

  auto set = std::make_shared<OrbitalSet>();
  set->source = {L, params.J, 0.0, 0.0, p};
  set->orbitals.resize(L, L);
  set->energies.resize(L);
  const double k0 = std::numbers::pi / (L + 1);
  for (int m = 1; m <= L; ++m) {
    set->energies[m - 1] = -2.0 * params.J * std::cos(m * k0);
    for (int j = 1; j <= L; ++j) set->orbitals(j - 1, m - 1) = std::sqrt(2.0 / (L + 1)) * std::sin(m * j * k0);
  }
  std::vector<int> occ;
  for (int m : modes) occ.push_back(m - 1);
  const SlaterState slater(set, occ);

  const auto C = static_cast<Eigen::Index>(basis.sector_size());
  const Eigen::VectorXd fermions = embed_slater(slater, basis);
  NodeState out;
  out.state = {&basis, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(basis.dimension()))};
  out.state.amplitudes.segment((p - 1) * C, C) = fermions / std::numbers::sqrt2;
  out.state.amplitudes.segment((q - 1) * C, C) = fermions / std::numbers::sqrt2;
  out.modes = modes;
  out.energy = slater.energy();
  out.coherence_length = coherence_length(reduced_density_matrix(out.state));
  out.residual = eigen_residual(out.state, out.energy);
  return out;
}

}  // namespace edh
