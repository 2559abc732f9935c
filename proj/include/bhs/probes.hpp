#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "bhs/evolve.hpp"
#include "bhs/field.hpp"
#include "bhs/operator_norm.hpp"
#include "bhs/series.hpp"

namespace bhs {

// Log-spaced schedule in [lo, hi], endpoints included, strictly increasing.
std::vector<double> log_spaced_times(double lo, double hi, int count);

// ---------------------------------------------------------------------------
// Kernel decay: sup-norm of derivatives of the free flow applied to smooth
// bandlimited near-delta data psi_delta (spectrum = smooth envelope supported
// in |q| <~ q0). The measured sup_x |D^gamma exp(-itH0) psi_delta| is fitted
// against the dispersive reference exponent -(dim + |gamma|)/4. The flow
// starts at t = 0: this probes the propagator itself, not a run.
struct KernelProbeConfig {
  double q0 = 0.75;                // envelope scale of the near-delta data
  std::array<int, 3> gamma{0, 0, 0};  // derivative multi-index (multiplier (iq)^gamma)
  std::vector<double> times;       // strictly increasing, all > 0
  double wrap_margin = 0.45;       // |x_a| > margin * L_a counts as edge mass
  double wrap_fraction_tol = 1e-8; // edge mass fraction above this aborts
};

DiagnosticSeries kernel_decay_probe(const GridSpec& grid, const KernelProbeConfig& cfg);

// The probe's initial data (unit-plateau smooth spectral envelope), exposed
// so oracles can integrate the same profile.
ComplexField near_delta_data(const GridSpec& grid, double q0);

// ---------------------------------------------------------------------------
// Interaction decay: || Fc(alpha) F1(b) exp(+i(t-1)H0) [V psi](t) ||_2 over
// the dyadic samples, where V is the linear localized part of the run's
// interaction. Reference exponent -(e*delta - 1) with e = 1/4 + 3/(2 delta).
DiagnosticSeries interaction_decay_probe(const Trajectory& traj, double alpha,
                                         double b, double delta);

// ---------------------------------------------------------------------------
// Weak localization growth: first absolute moment <core, |x| core> of the
// weakly localized part vs t on the dyadic samples. Reference growth
// exponent 1/4 + epsilon.
DiagnosticSeries weak_localization_moment_series(const Trajectory& traj,
                                                 double alpha_w, double epsilon);

// ---------------------------------------------------------------------------
// Velocity bounds: grid operator norm of the cutoff-flow-weight composition
//   MMVB1: F2(x1/t^{1/4+eps} > 1) F1(t^{1/4-eps/3} P1 > 1/10) E exp(+iaH0) <x1>^-sigma
//   MMVB2: F2(sign x1/t^{1/4+eps} > 1) F1bar(t^{1/4-eps/3} P1 <= 1/10) E exp(-ibH0) <x1>^-sigma
// as a function of the flow duration a (resp. b), reported against the scale
// variable s = t^{1/4+eps} + a^{1/4}. E is a fixed spectral band envelope
// (band_q0) composed in so the flow stays inside the periodic box; 0 disables
// it. MMVB1 uses the sign-coherent outgoing side (+x1 with +P1), where the
// phase of the flow has no stationary point over the kept region.
enum class VelocityKind { MMVB1, MMVB2 };

struct VelocityProbeConfig {
  VelocityKind kind = VelocityKind::MMVB1;
  double t = 16.0;
  std::vector<double> a_values;  // ascending; MMVB1: a >= 0, MMVB2: 0 < b <= t
  double sigma = 2.0;
  double epsilon = 0.1;
  double band_q0 = 0.0;
  int sign = +1;                 // MMVB2 side selector
  std::uint64_t seed = 0x5EEDull;
  int max_iters = 300;
  double rel_tol = 1e-9;
};

// The composed map at one flow duration (forward and adjoint), for oracles.
LinearMap velocity_bound_map(const GridSpec& grid, const VelocityProbeConfig& cfg,
                             double a);

DiagnosticSeries velocity_bound_probe(const GridSpec& grid,
                                      const VelocityProbeConfig& cfg);

// ---------------------------------------------------------------------------
// Commutator decay: ||[Fc(|x|/t^alpha <= 1), F1(t^b |P| > 1)]|| vs t.
// Reference exponent -(alpha - b).
LinearMap commutator_map(const GridSpec& grid, double alpha, double b, double t);

DiagnosticSeries commutator_decay_probe(const GridSpec& grid, double alpha, double b,
                                        const std::vector<double>& times,
                                        std::uint64_t seed = 0x5EEDull,
                                        int max_iters = 300, double rel_tol = 1e-9);

// ---------------------------------------------------------------------------
// Weak vanishing: max over a fixed bank of test states of
//   |<g, (1 - Fc F1) exp(+i(t-1)H0) psi(t)>|
// on the dyadic samples, with the adjoint-correct a-priori bound
//   max_g ||(1 - F1 Fc) g||_2 * ||psi(t)||_2
// as an extra column (the pairing must sit below it; the bound itself decays
// because both cutoffs converge strongly to the identity on fixed states).
std::vector<ComplexField> make_test_bank(const GridSpec& grid, int count,
                                         std::uint64_t seed);

DiagnosticSeries weak_vanishing_probe(const Trajectory& traj,
                                      const std::vector<ComplexField>& bank,
                                      double alpha, double b);

}  // namespace bhs
