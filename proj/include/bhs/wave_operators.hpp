#pragma once

#include <string>
#include <vector>

#include "bhs/evolve.hpp"
#include "bhs/field.hpp"
#include "bhs/series.hpp"

namespace bhs {

// All estimators here work in the "start frame": a run begins at t = 1 with
// psi(1) = psi0, so the free backward flow that undoes the group motion is
// phi(t) = exp(+i (t-1) H0) psi(t) and the free reference is
// exp(-i (t-1) H0) psi0. Cutoff scales t^alpha, t^b use the absolute time t.

// phi(t) = exp(+i (t-1) H0) psi(t).
ComplexField to_start_frame(const ComplexField& psi_t, double t);
// Inverse of to_start_frame.
ComplexField from_start_frame(const ComplexField& phi, double t);

// Admissibility shared by every channel estimator: 0 < b < alpha and
// alpha + 3b < 1 (the widest exponent range under which the channel limit is
// claimed). Stricter per-theorem ranges are checked by validate_params.
void check_channel_params(double alpha, double b);

// Free-channel candidate profile at time t:
//   F_c(|x|/t^alpha <= 1) F_1(t^b |P| > 1) exp(+i(t-1)H0) psi(t).
// Spectral cutoff first, then spatial, per the operator ordering.
ComplexField free_channel_state(const ComplexField& psi_t, double t,
                                double alpha, double b);

// Spatial-cutoff-only variant (no F_1): F_c(|x|/t^alpha <= 1) phi(t).
ComplexField free_channel_state_spatial_only(const ComplexField& psi_t, double t,
                                             double alpha);

// psi_d(t) = psi(t) - exp(-i(t-1)H0) psi0, the interacting remainder.
ComplexField scattered_remainder(const Trajectory& traj, double t);

// Dyadic Cauchy residuals ||A(2t) - A(t)||_2 where A(t) is the free-channel
// state of the full solution. The series scale is the earlier time of each
// pair. This is the convergence observable standing in for the t -> infinity
// limit.
DiagnosticSeries free_channel_cauchy_series(const Trajectory& traj, double alpha,
                                            double b);
// Same with the spatial-only channel map (dimension-generic variant;
// report-only outside its guaranteed regime).
DiagnosticSeries free_channel_cauchy_series_spatial(const Trajectory& traj,
                                                    double alpha);

// Last-sample estimate of the asymptotic free profile
//   phi_plus = psi0 + F_c F_1 exp(+i(t-1)H0) psi_d(t)   at t = last dyadic time
// together with the dyadic Cauchy residual series of the remainder part.
struct FreeProfile {
  ComplexField phi_plus;
  DiagnosticSeries residuals;
};
FreeProfile asymptotic_free_profile(const Trajectory& traj, double alpha, double b);

// Decomposition of the outside-cutoff remainder at a fixed time t:
//   u(t)   = exp(-i(t-1)H0) (1 - F_c(|x|/t^alpha_w <= 1)) exp(+i(t-1)H0) psi_d(t)
//   core   = prod_l F2bar(|x_l| <= t^{1/4+eps}) u(t)        (weakly localized)
//   leaks  = F_{2,t}(+-x_j > t^{1/4+eps}) u(t), 2*dim of them, where
//            F_{2,t}(+-x_j > s) = (prod_{l<j} F2bar(|x_l| <= s)) F2(+-x_j > s).
// The smooth partition is exact: core + sum(leaks) = u(t) to rounding.
struct WeaklyLocalized {
  ComplexField core;
  std::vector<ComplexField> leaks;
  std::vector<std::string> leak_names;  // "x0+", "x0-", "x1+", ...
  double partition_defect = 0.0;        // ||core + sum leaks - u||_2
  double outside_norm = 0.0;            // ||u||_2
};
WeaklyLocalized weakly_localized_part(const Trajectory& traj, double t,
                                      double alpha_w, double epsilon);

// ||leak_{j,+-}(t)||_2 over the dyadic times > 1; primary value is the max
// over directions, one extra column per direction plus the Bessel ratio
// sum_j ||leak_j||^2 / ||u||^2 (must stay <= 1 + rounding).
DiagnosticSeries directional_leakage_probe(const Trajectory& traj, double epsilon,
                                           double alpha_w);

}  // namespace bhs
