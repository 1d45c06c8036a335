#include "edh/fit.hpp"

#include <gsl/gsl_fit.h>

#include <cmath>
#include <limits>
#include <vector>

#include "edh/model.hpp"

namespace edh {

LinearFit fit_linear(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ValidationError("fit: x and y differ in length");
  if (x.size() < 2) throw ValidationError("fit: need at least two points");
  double c0 = 0, c1 = 0, cov00 = 0, cov01 = 0, cov11 = 0, sumsq = 0;
  const int status = gsl_fit_linear(x.data(), 1, y.data(), 1, x.size(), &c0, &c1, &cov00, &cov01, &cov11, &sumsq);
  if (status != 0 || !std::isfinite(c1)) throw SolverError("fit: degenerate abscissae");
  LinearFit f;
  f.intercept = c0;
  f.slope = c1;
  f.residual = sumsq;
  f.points = x.size();
  if (x.size() > 2) {
    f.intercept_stderr = std::sqrt(cov00);
    f.slope_stderr = std::sqrt(cov11);
  } else {
    f.intercept_stderr = f.slope_stderr = std::numeric_limits<double>::quiet_NaN();
  }
  return f;
}

LinearFit fit_power_law(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ValidationError("fit: x and y differ in length");
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] > 0.0 && y[i] > 0.0) {
      lx.push_back(std::log(x[i]));
      ly.push_back(std::log(y[i]));
    }
  return fit_linear(lx, ly);
}

}  // namespace edh
