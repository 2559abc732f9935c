#pragma once

#include <cstddef>
#include <vector>

namespace bhs {

// Least-squares power-law fit. Fitting y = C * s^p over a window of scales is
// a linear regression of log(y) on log(s); `exponent` is the slope p.
struct FitResult {
  double exponent = 0.0;
  double intercept = 0.0;     // log(C)
  double rms_residual = 0.0;  // in log space
  std::size_t points_used = 0;
};

// Fits values[i] ~ C * scales[i]^p using the points with lo <= scales[i] <= hi.
// Requires at least five points in the window, all with positive value
// (a nonpositive value inside the window is an error, not a skip); throws
// ValidationError otherwise.
FitResult fit_exponent(const std::vector<double>& scales,
                       const std::vector<double>& values, double lo, double hi);

}  // namespace bhs
