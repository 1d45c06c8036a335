#pragma once

#include <cstddef>
#include <span>

namespace edh {

/// Ordinary least squares y = intercept + slope * x.
struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
  double intercept_stderr = 0.0;
  /// Sum of squared residuals.
  double residual = 0.0;
  std::size_t points = 0;
};

/// Requires at least two points with distinct x. Standard errors are NaN for two points.
LinearFit fit_linear(std::span<const double> x, std::span<const double> y);

/// OLS of log(y) on log(x) over the points with x > 0 and y > 0.
LinearFit fit_power_law(std::span<const double> x, std::span<const double> y);

}  // namespace edh
