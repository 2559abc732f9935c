#include "bhs/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

#include "bhs/cutoff.hpp"
#include "bhs/errors.hpp"
#include "bhs/fft_backend.hpp"
#include "bhs/spectral.hpp"

namespace bhs {

namespace {

constexpr double kTimeTol = 1e-9;

std::string step_msg(const char* what, long step, double t) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%s at step %ld (t = %.6f)", what, step, t);
  return buf;
}

}  // namespace

long validate_run_config(const RunConfig& cfg) {
  if (cfg.grid.size() == 0) throw ValidationError("run: empty grid");
  if (cfg.dt <= 0.0) throw ValidationError("run: dt must be positive");
  if (cfg.t_end <= 1.0) throw ValidationError("run: t_end must exceed the start time 1");
  const double ratio = (cfg.t_end - 1.0) / cfg.dt;
  const long n = std::llround(ratio);
  if (n < 1 || std::abs(1.0 + n * cfg.dt - cfg.t_end) > kTimeTol)
    throw ValidationError("run: (t_end - 1) must be an integer number of dt steps");
  if (cfg.sample_stride < 0) throw ValidationError("run: sample_stride must be >= 0");
  if (cfg.check_every < 1) throw ValidationError("run: check_every must be >= 1");
  if (cfg.blowup_factor <= 1.0) throw ValidationError("run: blowup_factor must exceed 1");
  validate_interaction(cfg.interaction);
  return n;
}

ComplexField make_initial_state(const GridSpec& grid, const InitialData& data) {
  if (data.packets.empty()) throw ValidationError("initial data: no packets");
  for (const auto& p : data.packets) {
    if (p.width <= 0.0) throw ValidationError("initial data: packet width must be positive");
    for (int a = 0; a < grid.dim; ++a)
      if (std::abs(p.carrier[a]) > 0.9 * grid.max_abs_q(a))
        throw ValidationError("initial data: carrier too close to the lattice Nyquist limit");
  }
  ComplexField psi(grid, FieldRep::Position);
  const int n0 = grid.points[0];
  const int n1 = grid.dim > 1 ? grid.points[1] : 1;
  const int n2 = grid.dim > 2 ? grid.points[2] : 1;
  std::size_t flat = 0;
  for (int i0 = 0; i0 < n0; ++i0)
    for (int i1 = 0; i1 < n1; ++i1)
      for (int i2 = 0; i2 < n2; ++i2, ++flat) {
        const int idx[3] = {i0, i1, i2};
        double x[3] = {0.0, 0.0, 0.0};
        for (int a = 0; a < grid.dim; ++a) x[a] = grid.x(a, idx[a]);
        std::complex<double> v(0.0, 0.0);
        for (const auto& p : data.packets) {
          double r2 = 0.0;
          double phase = 0.0;
          for (int a = 0; a < grid.dim; ++a) {
            const double d = x[a] - p.center[a];
            r2 += d * d;
            phase += p.carrier[a] * x[a];
          }
          const double env = std::exp(-r2 / (2.0 * p.width * p.width));
          v += std::complex<double>(p.amplitude_re, p.amplitude_im) * env *
               std::complex<double>(std::cos(phase), std::sin(phase));
        }
        psi[flat] = v;
      }
  if (data.envelope_q0 > 0.0) psi = apply_cutoff(psi, spectral_envelope(data.envelope_q0), 1.0);
  zero_nyquist(psi);
  if (data.normalize) {
    const double nrm = l2_norm(psi);
    if (nrm <= 0.0) throw ValidationError("initial data: zero state after band limiting");
    for (std::size_t i = 0; i < psi.size(); ++i) psi[i] /= nrm;
  }
  return psi;
}

Trajectory::Trajectory(RunConfig cfg, std::vector<Sample> samples)
    : cfg_(std::move(cfg)), samples_(std::move(samples)) {
  if (samples_.empty()) throw ValidationError("trajectory: no samples retained");
}

const Sample& Trajectory::at_time(double t) const {
  for (const auto& s : samples_)
    if (std::abs(s.t - t) <= kTimeTol) return s;
  throw ValidationError("trajectory: no sample retained at requested time");
}

bool Trajectory::has_time(double t) const {
  for (const auto& s : samples_)
    if (std::abs(s.t - t) <= kTimeTol) return true;
  return false;
}

std::vector<double> Trajectory::dyadic_times() const {
  std::vector<double> out;
  for (double T = 1.0; T <= final_time() + kTimeTol; T *= 2.0)
    if (has_time(T)) out.push_back(T);
  return out;
}

StrangStepper::StrangStepper(const GridSpec& grid, const InteractionSpec& spec, double dt)
    : grid_(grid), spec_(spec), dt_(dt) {
  if (dt <= 0.0) throw ValidationError("stepper: dt must be positive");
  validate_interaction(spec);
  const std::size_t n = grid.size();
  const double inv_n = 1.0 / static_cast<double>(n);
  free_table_.resize(n);
  const int n0 = grid.points[0];
  const int n1 = grid.dim > 1 ? grid.points[1] : 1;
  const int n2 = grid.dim > 2 ? grid.points[2] : 1;
  std::size_t flat = 0;
  for (int i0 = 0; i0 < n0; ++i0)
    for (int i1 = 0; i1 < n1; ++i1)
      for (int i2 = 0; i2 < n2; ++i2, ++flat) {
        const int idx[3] = {i0, i1, i2};
        double q2 = 0.0;
        for (int a = 0; a < grid.dim; ++a) {
          const double q = grid.q(a, idx[a]);
          q2 += q * q;
        }
        const double phase = -dt * q2 * q2;
        free_table_[flat] =
            std::complex<double>(std::cos(phase) * inv_n, std::sin(phase) * inv_n);
      }
  if (spec.has_linear()) {
    env_table_.resize(n);
    flat = 0;
    for (int i0 = 0; i0 < n0; ++i0)
      for (int i1 = 0; i1 < n1; ++i1)
        for (int i2 = 0; i2 < n2; ++i2, ++flat) {
          const int idx[3] = {i0, i1, i2};
          double r2 = 0.0;
          for (int a = 0; a < grid.dim; ++a) {
            const double x = grid.x(a, idx[a]);
            r2 += x * x;
          }
          env_table_[flat] = std::pow(1.0 + r2, -0.5 * spec.sigma);
        }
    if (!spec.is_time_dependent() && !spec.has_power()) {
      half_lin_table_.resize(n);
      const std::complex<double> amp(spec.amplitude, spec.amplitude_imag);
      const std::complex<double> mi(0.0, -1.0);
      for (std::size_t i = 0; i < n; ++i)
        half_lin_table_[i] = std::exp(mi * (0.5 * dt) * amp * env_table_[i]);
    }
  }
}

void StrangStepper::step(ComplexField& psi, double t) const {
  if (psi.rep() != FieldRep::Position)
    throw ValidationError("stepper: state must be in position representation");
  if (!(psi.grid() == grid_)) throw ValidationError("stepper: state grid mismatch");

  const double tm = t + 0.5 * dt_;
  const std::size_t n = psi.size();
  auto half_phase = [&]() {
    if (!half_lin_table_.empty()) {
      for (std::size_t i = 0; i < n; ++i) psi[i] *= half_lin_table_[i];
      return;
    }
    if (spec_.kind == InteractionKind::None) return;
    const std::complex<double> amp(spec_.amplitude, spec_.amplitude_imag);
    const double mod = spec_.has_linear() ? modulation_value(spec_, tm) : 0.0;
    const std::complex<double> mi(0.0, -1.0);
    for (std::size_t i = 0; i < n; ++i) {
      std::complex<double> v(0.0, 0.0);
      if (spec_.has_linear()) v += amp * (mod * env_table_[i]);
      if (spec_.has_power())
        v += spec_.coupling * std::pow(std::abs(psi[i]), spec_.power - 1.0);
      psi[i] *= std::exp(mi * (0.5 * dt_) * v);
    }
  };

  half_phase();
  fft::forward(grid_, psi.data());
  for (std::size_t i = 0; i < n; ++i) psi[i] *= free_table_[i];
  fft::backward(grid_, psi.data());
  half_phase();
}

std::vector<long> sample_steps(const RunConfig& cfg) {
  const long n = validate_run_config(cfg);
  std::set<long> keep{0, n};
  if (cfg.sample_stride > 0)
    for (long k = 0; k <= n; k += cfg.sample_stride) keep.insert(k);
  if (cfg.dyadic_samples)
    for (double T = 2.0; T <= cfg.t_end + kTimeTol; T *= 2.0) {
      const long k = std::llround((T - 1.0) / cfg.dt);
      if (k >= 0 && k <= n && std::abs(1.0 + k * cfg.dt - T) <= kTimeTol) keep.insert(k);
    }
  return {keep.begin(), keep.end()};
}

Trajectory evolve(const RunConfig& cfg, const std::vector<StepObserver>& observers) {
  return evolve_from(cfg, 0, make_initial_state(cfg.grid, cfg.data), observers, {});
}

Trajectory evolve_from(const RunConfig& cfg, long start_step, const ComplexField& state,
                       const std::vector<StepObserver>& observers,
                       std::vector<Sample> prior_samples) {
  const long n_total = validate_run_config(cfg);
  if (start_step < 0 || start_step > n_total)
    throw ValidationError("run: start step outside the schedule");
  if (state.rep() != FieldRep::Position || !(state.grid() == cfg.grid))
    throw ValidationError("run: start state does not match the configured grid");

  const std::vector<long> keep = sample_steps(cfg);
  StrangStepper stepper(cfg.grid, cfg.interaction, cfg.dt);
  ComplexField psi = state;
  std::vector<Sample> samples = std::move(prior_samples);

  const double sup0 = sup_norm(psi);
  const double norm0 = l2_norm(psi);
  if (!(sup0 > 0.0) || !std::isfinite(sup0))
    throw ValidationError("run: start state is zero or non-finite");
  const bool conserves_norm = !cfg.interaction.is_complex();

  auto visit = [&](long k, double t) {
    for (const auto& ob : observers) {
      const long stride = std::max<long>(1, ob.stride);
      if (ob.fn && k % stride == 0) ob.fn(k, t, psi);
    }
    // On resume the start step may already sit in prior_samples; keep one copy.
    const bool already = !samples.empty() && samples.back().step >= k;
    if (!already && std::binary_search(keep.begin(), keep.end(), k))
      samples.push_back({k, t, psi});
  };
  auto stability_check = [&](long k, double t) {
    const double sup = sup_norm(psi);
    if (!std::isfinite(sup)) throw AbortError(step_msg("run aborted: non-finite state", k, t));
    if (sup > cfg.blowup_factor * sup0)
      throw AbortError(step_msg("run aborted: amplitude blowup", k, t));
    if (conserves_norm && std::abs(l2_norm(psi) - norm0) > 1e-6 * norm0)
      throw AbortError(step_msg("run aborted: mass-conservation drift", k, t));
  };

  for (long k = start_step; k < n_total; ++k) {
    const double t = 1.0 + k * cfg.dt;
    visit(k, t);
    stepper.step(psi, t);
    if ((k + 1) % cfg.check_every == 0) stability_check(k + 1, 1.0 + (k + 1) * cfg.dt);
  }
  visit(n_total, 1.0 + n_total * cfg.dt);
  return Trajectory(cfg, std::move(samples));
}

ComplexField free_reference(const ComplexField& psi0, double t) {
  return free_propagate(psi0, t - 1.0);
}

double duhamel_residual(const Trajectory& traj, double t) {
  const Sample& end = traj.at_time(t);
  const ComplexField& psi0 = traj.initial();
  const RunConfig& cfg = traj.config();
  const GridSpec& grid = psi0.grid();

  // Nodes: every retained sample in [1, t].
  std::vector<const Sample*> nodes;
  for (const auto& s : traj.samples())
    if (s.t <= t + kTimeTol) nodes.push_back(&s);
  if (nodes.size() < 2) throw ValidationError("duhamel: need at least two samples in [1, t]");

  auto integrand = [&](const Sample& s) {
    // N(x, s, |psi|) psi, flowed freely from s to t.
    return free_propagate(interaction_apply(cfg.interaction, s.field, s.t), t - s.t);
  };

  ComplexField integral(grid, FieldRep::Position);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const double lo = i == 0 ? nodes[i]->t : nodes[i - 1]->t;
    const double hi = i + 1 == nodes.size() ? nodes[i]->t : nodes[i + 1]->t;
    const double w = 0.5 * (hi - lo);
    if (w <= 0.0) continue;
    ComplexField g = integrand(*nodes[i]);
    for (std::size_t j = 0; j < integral.size(); ++j) integral[j] += w * g[j];
  }

  ComplexField res = sub(end.field, free_reference(psi0, t));
  const std::complex<double> im(0.0, 1.0);
  for (std::size_t j = 0; j < res.size(); ++j) res[j] += im * integral[j];
  const double ref = l2_norm(psi0);
  if (ref <= 0.0) throw ValidationError("duhamel: initial state has zero norm");
  return l2_norm(res) / ref;
}

}  // namespace bhs
