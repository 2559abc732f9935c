#ifndef BHS_SMOOTH_STEP_HPP
#define BHS_SMOOTH_STEP_HPP

namespace bhs {

/// Canonical smooth transition profile shared by every cutoff.
///
/// S(k) = g(2k-1) / (g(2k-1) + g(2-2k)) with g(s) = exp(-1/s) for s > 0 and
/// g = 0 otherwise. S is monotone, identically 0 for k <= 1/2, identically 1
/// for k >= 1, and S(3/4) = 1/2.
double smooth_step(double k);

/// Closed-form derivative of smooth_step (zero outside (1/2, 1)).
double smooth_step_deriv(double k);

}  // namespace bhs

#endif
