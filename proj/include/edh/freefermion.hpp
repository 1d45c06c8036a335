#pragma once

#include <memory>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "edh/fit.hpp"
#include "edh/hamiltonian.hpp"

namespace edh {

/// Quadratic fermion Hamiltonian seen when the particle is pinned at
/// `impurity_site`: hopping -J, contact U on the impurity site, bias eps * i / L.
struct SingleParticleHamiltonian {
  int L = 1;
  double J = 1.0;
  double U = 0.0;
  double eps = 0.0;
  int impurity_site = 1;

  void validate() const;
  Eigen::VectorXd diagonal() const;
  Eigen::MatrixXd dense() const;

  static SingleParticleHamiltonian for_site(const ModelParams& params, int site) {
    return {params.L, params.J, params.U, params.eps, site};
  }
};

/// Orthonormal orbitals as columns, energies ascending.
struct OrbitalSet {
  SingleParticleHamiltonian source;
  Eigen::MatrixXd orbitals;
  Eigen::VectorXd energies;

  int L() const { return static_cast<int>(orbitals.rows()); }
};

/// Tridiagonal MRRR solve (LAPACK dstevr); O(L^2) for the full orbital set.
OrbitalSet single_particle_diagonalize(const SingleParticleHamiltonian& h);

/// N occupied orbitals of an OrbitalSet.
class SlaterState {
 public:
  SlaterState(std::shared_ptr<const OrbitalSet> orbitals, std::vector<int> occupation);

  /// Lowest N orbitals. Ties at the Fermi level are resolved lowest index first
  /// and reported by fermi_level_tie().
  static SlaterState ground_state(std::shared_ptr<const OrbitalSet> orbitals, int N);

  const OrbitalSet& orbitals() const { return *orbitals_; }
  const std::vector<int>& occupation() const { return occupation_; }
  int N() const { return static_cast<int>(occupation_.size()); }
  int L() const { return orbitals_->L(); }
  double energy() const;
  bool fermi_level_tie() const { return fermi_level_tie_; }

  /// L x N matrix of the occupied orbital columns.
  Eigen::MatrixXd occupied_orbitals() const;

 private:
  std::shared_ptr<const OrbitalSet> orbitals_;
  std::vector<int> occupation_;
  bool fermi_level_tie_ = false;
};

/// <a|b> = det(A_occ^T B_occ). Evaluated through an LU log-determinant so large N
/// does not underflow on the way.
double slater_overlap(const SlaterState& a, const SlaterState& b);

/// Amplitudes of the Slater state on the fermion sector of `basis`, in the
/// basis' mask order: amplitude(x_1 < ... < x_N) = det[phi_b(x_a)].
Eigen::VectorXd embed_slater(const SlaterState& s, const FockBasis& basis);

/// |site> (x) |s>. Requires Jp = 0 and orbitals of H_site with the basis couplings.
ManyBodyState integrable_eigenstate(const FockBasis& basis, int site, const SlaterState& s);

/// (|1>(x)|s_first> + |L>(x)|s_last>) / sqrt 2 for a degenerate pair.
/// Throws ValidationError when the Slater energies differ by more than `tolerance`.
ManyBodyState degenerate_superposition(const FockBasis& basis, const SlaterState& s_first, const SlaterState& s_last,
                                       double tolerance = 1e-10);

/// |H psi - E psi| with the full model Hamiltonian of the state's basis.
double eigen_residual(const ManyBodyState& state, double energy);

/// (L-1) g / sqrt(1 + g), the closed form printed for the superposition state,
/// with g the squared overlap.
double printed_superposition_coherence(double g, int L);

/// (L-1) sqrt(2g / (1 + g)): what the coherence-length formula gives on the
/// superposition state directly.
double direct_superposition_coherence(double g, int L);

struct OverlapSweepSpec {
  std::vector<int> sizes;
  double J = 1.0;
  double U = 1.0;
  /// N = floor(density * L); 0.5 reproduces the half-filling rule.
  double density = 0.5;
  /// Small sizes at which the superposition is built as a many-body vector and
  /// its coherence length evaluated directly.
  std::vector<int> construct_sizes = {4, 6, 8, 10};
};

struct OverlapPoint {
  int L = 0;
  int N = 0;
  double overlap_squared = 0.0;
  double printed_length = 0.0;
  double direct_length = 0.0;
  bool fermi_level_tie = false;
};

struct ConstructedPoint {
  int L = 0;
  int N = 0;
  double overlap_squared = 0.0;
  double measured_length = 0.0;
  double residual = 0.0;
};

struct OverlapScalingResult {
  std::vector<OverlapPoint> points;
  std::vector<ConstructedPoint> constructed;
  /// log g = c - alpha log L.
  double alpha = 0.0;
  double alpha_stderr = 0.0;
  LinearFit overlap_fit;
  LinearFit printed_length_fit;
  LinearFit direct_length_fit;
  std::optional<LinearFit> constructed_length_fit;
  bool strictly_decreasing = false;
};

OverlapScalingResult orthogonality_scaling(const OverlapSweepSpec& spec);

struct NodeState {
  ManyBodyState state;
  std::vector<int> modes;
  double energy = 0.0;
  double coherence_length = 0.0;
  double residual = 0.0;
};

/// Free-chain Slater state whose orbitals sin(m pi j / (L+1)) all vanish at
/// sites p and q, tensored with the particle superposition (|p> + |q>) / sqrt 2.
/// Requires Jp = 0 and eps = 0; any U. Returns nullopt when fewer than N such
/// orbitals exist.
std::optional<NodeState> node_state_construction(const FockBasis& basis, int p, int q);

}  // namespace edh
