#include "bhs/smooth_step.hpp"

#include <cmath>

namespace bhs {

namespace {

inline double bump(double s) { return s > 0.0 ? std::exp(-1.0 / s) : 0.0; }

// d/ds exp(-1/s) = exp(-1/s)/s^2; underflows harmlessly to 0 for tiny s.
inline double bump_deriv(double s) { return s > 0.0 ? std::exp(-1.0 / s) / (s * s) : 0.0; }

}  // namespace

double smooth_step(double k) {
  if (k <= 0.5) return 0.0;
  if (k >= 1.0) return 1.0;
  const double u = bump(2.0 * k - 1.0);
  const double v = bump(2.0 - 2.0 * k);
  return u / (u + v);
}

double smooth_step_deriv(double k) {
  if (k <= 0.5 || k >= 1.0) return 0.0;
  const double u = bump(2.0 * k - 1.0);
  const double v = bump(2.0 - 2.0 * k);
  const double du = 2.0 * bump_deriv(2.0 * k - 1.0);
  const double dv = -2.0 * bump_deriv(2.0 - 2.0 * k);
  const double denom = (u + v) * (u + v);
  return (du * v - u * dv) / denom;
}

}  // namespace bhs
