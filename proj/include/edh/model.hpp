#pragma once

#include <stdexcept>
#include <string>

namespace edh {

/// Raised for parameter or input-shape problems detected before any compute.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a numerical routine fails at run time.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, long index = -1)
      : std::runtime_error(what), index_(index) {}
  long index() const noexcept { return index_; }

 private:
  long index_;
};

/// Couplings of the heavy-particle / Fermi-gas lattice model on an open chain.
///
/// Sites are labelled 1..L. The fermionic bias is eps * (j / L) on site j.
/// `Jnn` is a fermionic next-nearest-neighbour hopping; it is zero for the
/// model studied here and only exists as an extension point.
struct ModelParams {
  int L = 1;
  int N = 0;
  double J = 1.0;
  double Jp = 0.0;
  double U = 0.0;
  double eps = 0.0;
  double Jnn = 0.0;

  double density() const { return L > 0 ? static_cast<double>(N) / L : 0.0; }

  /// Throws ValidationError when the parameters cannot describe a system.
  void validate() const;

  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

/// N = L/2 for even L, (L-1)/2 for odd L.
constexpr int half_filling(int L) { return L / 2; }

ModelParams with_half_filling(ModelParams params);

std::string describe(const ModelParams& params);

}  // namespace edh
