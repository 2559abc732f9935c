#ifndef BHS_EVOLVE_HPP
#define BHS_EVOLVE_HPP

#include <array>
#include <complex>
#include <functional>
#include <vector>

#include "bhs/field.hpp"
#include "bhs/interaction.hpp"

namespace bhs {

struct GaussianPacket {
  std::array<double, 3> center{0.0, 0.0, 0.0};
  double width = 1.0;
  std::array<double, 3> carrier{0.0, 0.0, 0.0};
  double amplitude_re = 1.0;
  double amplitude_im = 0.0;
};

struct InitialData {
  std::vector<GaussianPacket> packets;
  double envelope_q0 = 0.0;  // > 0: smooth band limit |q| <~ q0
  bool normalize = true;     // rescale to unit L2 norm
};

struct ScatteringParams {
  double alpha = 0.2;
  double b = 0.1;
  double epsilon = 0.1;
  double delta = 4.0;
};

struct RunConfig {
  GridSpec grid;
  InteractionSpec interaction;
  InitialData data;
  double dt = 1.0 / 64;
  double t_end = 64.0;
  long sample_stride = 64;     // keep every k-th step (0: only dyadic + ends)
  bool dyadic_samples = true;  // also keep t = 2, 4, 8, ...
  ScatteringParams scattering;
  long check_every = 16;       // stability-check cadence in steps
  double blowup_factor = 1e6;  // sup growth beyond this aborts
};

/// Number of steps from t = 1 to t_end; throws unless (t_end - 1)/dt is an
/// integer to within 1e-9 and the config is otherwise consistent.
long validate_run_config(const RunConfig& cfg);

/// Superpose the packets, band-limit, drop the Nyquist planes, normalize.
ComplexField make_initial_state(const GridSpec& grid, const InitialData& data);

struct Sample {
  long step = 0;
  double t = 1.0;
  ComplexField field;
};

class Trajectory {
 public:
  Trajectory(RunConfig cfg, std::vector<Sample> samples);

  const RunConfig& config() const { return cfg_; }
  const std::vector<Sample>& samples() const { return samples_; }
  const ComplexField& initial() const { return samples_.front().field; }
  const ComplexField& final_field() const { return samples_.back().field; }
  double final_time() const { return samples_.back().t; }
  /// Sample at time t (within 1e-9); throws if not retained.
  const Sample& at_time(double t) const;
  bool has_time(double t) const;
  /// Retained times that are powers of two, ascending.
  std::vector<double> dyadic_times() const;

 private:
  RunConfig cfg_;
  std::vector<Sample> samples_;
};

/// One Strang step: half interaction phase, full free flight, half phase.
/// Time-dependent modulations are frozen at the step midpoint; amplitude
/// factors use the current state, so each phase substep is the exact
/// subflow for the linear and pure-power families.
class StrangStepper {
 public:
  StrangStepper(const GridSpec& grid, const InteractionSpec& spec, double dt);
  /// Advance psi (position representation) from t to t + dt.
  void step(ComplexField& psi, double t) const;
  double dt() const { return dt_; }

 private:
  GridSpec grid_;
  InteractionSpec spec_;
  double dt_;
  std::vector<std::complex<double>> free_table_;      // exp(-i dt |q|^4) / Nprod
  std::vector<std::complex<double>> half_lin_table_;  // constant-linear fast path
  std::vector<double> env_table_;                     // (1+|x|^2)^(-sigma/2)
};

struct StepObserver {
  long stride = 1;
  std::function<void(long step, double t, const ComplexField& psi)> fn;
};

/// Run from psi(1) = initial data to t_end; returns the retained samples.
/// Observers fire at every step divisible by their stride (step 0 included).
/// Step times are computed as t_k = 1 + k*dt from the integer step index, so
/// a resumed run retraces the identical floating-point trajectory.
Trajectory evolve(const RunConfig& cfg, const std::vector<StepObserver>& observers = {});

/// Same, but starting from a mid-run state (resume path).
Trajectory evolve_from(const RunConfig& cfg, long start_step, const ComplexField& state,
                       const std::vector<StepObserver>& observers = {},
                       std::vector<Sample> prior_samples = {});

/// Step indices retained by the sampling schedule (sorted, unique).
std::vector<long> sample_steps(const RunConfig& cfg);

/// exp(-i (t-1) H0) applied to the initial state: the free reference flow.
ComplexField free_reference(const ComplexField& psi0, double t);

/// || psi(t) - U0(t-1) psi(1) + i * Int_1^t U0(t-s) [N psi](s) ds ||_2 with
/// the integral done by trapezoid over the samples retained in [1, t].
double duhamel_residual(const Trajectory& traj, double t);

}  // namespace bhs

#endif
