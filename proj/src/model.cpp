#include "edh/model.hpp"

#include <cmath>
#include <sstream>

namespace edh {

void ModelParams::validate() const {
  if (L < 1) throw ValidationError("L must be >= 1, got " + std::to_string(L));
  if (L > 30) throw ValidationError("L must be <= 30 for the many-body basis, got " + std::to_string(L));
  if (N < 0 || N > L)
    throw ValidationError("N must satisfy 0 <= N <= L, got N=" + std::to_string(N) +
                          " L=" + std::to_string(L));
  for (double v : {J, Jp, U, eps, Jnn})
    if (!std::isfinite(v)) throw ValidationError("couplings must be finite");
  if (J < 0.0) throw ValidationError("J must be non-negative");
  if (Jp < 0.0) throw ValidationError("Jp must be non-negative");
}

ModelParams with_half_filling(ModelParams params) {
  params.N = half_filling(params.L);
  return params;
}

std::string describe(const ModelParams& p) {
  std::ostringstream os;
  os << "L=" << p.L << " N=" << p.N << " J=" << p.J << " Jp=" << p.Jp << " U=" << p.U
     << " eps=" << p.eps;
  if (p.Jnn != 0.0) os << " Jnn=" << p.Jnn;
  return os.str();
}

}  // namespace edh
