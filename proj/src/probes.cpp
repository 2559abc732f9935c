#include "bhs/probes.hpp"

#include <cmath>
#include <complex>
#include <cstdio>

#include "bhs/cutoff.hpp"
#include "bhs/errors.hpp"
#include "bhs/interaction.hpp"
#include "bhs/rng.hpp"
#include "bhs/spectral.hpp"
#include "bhs/wave_operators.hpp"

namespace bhs {
namespace {

void check_times(const std::vector<double>& times, const char* who) {
  if (times.size() < 2)
    throw ValidationError(std::string(who) + ": need at least two times");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] > 0.0))
      throw ValidationError(std::string(who) + ": times must be positive");
    if (i > 0 && !(times[i] > times[i - 1]))
      throw ValidationError(std::string(who) + ": times must be strictly increasing");
  }
}

// <x1>^-sigma axis weight.
ComplexField axis_weight(const ComplexField& f, double sigma) {
  return apply_position_weight(f, [sigma](const std::array<double, 3>& x) {
    return std::complex<double>(std::pow(1.0 + x[0] * x[0], -0.5 * sigma), 0.0);
  });
}

}  // namespace

std::vector<double> log_spaced_times(double lo, double hi, int count) {
  if (!(lo > 0.0) || !(hi > lo) || count < 2)
    throw ValidationError("log_spaced_times: need 0 < lo < hi and count >= 2");
  std::vector<double> out(count);
  const double r = std::log(hi / lo) / (count - 1);
  for (int i = 0; i < count; ++i) out[i] = lo * std::exp(r * i);
  out.front() = lo;
  out.back() = hi;
  return out;
}

ComplexField near_delta_data(const GridSpec& grid, double q0) {
  if (!(q0 > 0.0) || !(q0 < grid.max_abs_q(0)))
    throw ValidationError("near_delta_data: q0 must lie inside the resolved band");
  const std::vector<double> env = cutoff_table(spectral_envelope(q0), grid, 1.0);
  ComplexField f(grid, FieldRep::Spectrum);
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = env[i];
  return f;
}

DiagnosticSeries kernel_decay_probe(const GridSpec& grid, const KernelProbeConfig& cfg) {
  check_times(cfg.times, "kernel_decay_probe");
  int total_gamma = 0;
  for (int a = 0; a < grid.dim; ++a) {
    if (cfg.gamma[a] < 0)
      throw ValidationError("kernel_decay_probe: gamma must be nonnegative");
    total_gamma += cfg.gamma[a];
  }

  ComplexField base = near_delta_data(grid, cfg.q0);
  if (total_gamma > 0) {
    const std::array<int, 3> gamma = cfg.gamma;
    const int dim = grid.dim;
    base = apply_multiplier(base, [gamma, dim](const std::array<double, 3>& q) {
      std::complex<double> m(1.0, 0.0);
      for (int a = 0; a < dim; ++a)
        for (int k = 0; k < gamma[a]; ++k) m *= std::complex<double>(0.0, q[a]);
      return m;
    });
  }

  DiagnosticSeries s;
  char label[64];
  std::snprintf(label, sizeof label, "kernel_decay_dim%d_gamma%d", grid.dim,
                total_gamma);
  s.label = label;
  s.scale_name = "t";
  s.extra_names = {"edge_mass_fraction"};
  s.reference_exponent = -(grid.dim + total_gamma) / 4.0;

  for (double t : cfg.times) {
    ComplexField u = from_spectrum(free_propagate(base, t));
    // Mass near the box edge signals periodic wrap: the probe's fit would be
    // contaminated, so abort rather than report a polluted series.
    double edge = 0.0, total = 0.0;
    const int n0 = grid.points[0];
    const int n1 = grid.dim > 1 ? grid.points[1] : 1;
    const int n2 = grid.dim > 2 ? grid.points[2] : 1;
    std::size_t flat = 0;
    for (int i0 = 0; i0 < n0; ++i0)
      for (int i1 = 0; i1 < n1; ++i1)
        for (int i2 = 0; i2 < n2; ++i2, ++flat) {
          const int idx[3] = {i0, i1, i2};
          const double a2 = std::norm(u[flat]);
          total += a2;
          for (int a = 0; a < grid.dim; ++a)
            if (std::abs(grid.x(a, idx[a])) > cfg.wrap_margin * grid.box_length[a]) {
              edge += a2;
              break;
            }
        }
    const double frac = total > 0.0 ? edge / total : 0.0;
    if (frac > cfg.wrap_fraction_tol) {
      char msg[160];
      std::snprintf(msg, sizeof msg,
                    "kernel_decay_probe: wrap-around at t=%g (edge mass fraction "
                    "%.3g > %.3g); enlarge the box or shorten the schedule",
                    t, frac, cfg.wrap_fraction_tol);
      throw AbortError(msg);
    }
    s.append(t, sup_norm(u), {frac});
  }
  return s;
}

DiagnosticSeries interaction_decay_probe(const Trajectory& traj, double alpha,
                                         double b, double delta) {
  if (!(delta > 0.0)) throw ValidationError("interaction_decay_probe: delta must be > 0");
  const double e = 0.25 + 1.5 / delta;
  const InteractionSpec lin = linear_part(traj.config().interaction);

  DiagnosticSeries s;
  s.label = "interaction_decay";
  s.scale_name = "t";
  s.reference_exponent = -(e * delta - 1.0);

  for (double t : traj.dyadic_times()) {
    const ComplexField& psi = traj.at_time(t).field;
    ComplexField v = interaction_apply(lin, psi, t);
    ComplexField w = free_channel_state(v, t, alpha, b);
    s.append(t, l2_norm(w));
  }
  return s;
}

DiagnosticSeries weak_localization_moment_series(const Trajectory& traj,
                                                 double alpha_w, double epsilon) {
  DiagnosticSeries s;
  s.label = "weak_localization_moment";
  s.scale_name = "t";
  s.extra_names = {"core_norm", "partition_defect"};
  s.reference_exponent = 0.25 + epsilon;

  for (double t : traj.dyadic_times()) {
    if (t <= 1.0 + 1e-9) continue;  // remainder vanishes identically at t = 1
    const WeaklyLocalized w = weakly_localized_part(traj, t, alpha_w, epsilon);
    const double moment = norms_and_moments(w.core, NormKind::AbsXMoment);
    s.append(t, moment, {l2_norm(w.core), w.partition_defect});
  }
  return s;
}

LinearMap velocity_bound_map(const GridSpec& grid, const VelocityProbeConfig& cfg,
                             double a) {
  (void)grid;  // maps are grid-agnostic; the parameter documents the domain
  if (!(cfg.t >= 1.0)) throw ValidationError("velocity_bound_map: t must be >= 1");
  if (!(cfg.sigma > 0.0)) throw ValidationError("velocity_bound_map: sigma must be > 0");
  if (!(cfg.epsilon > 0.0) || !(cfg.epsilon < 0.75))
    throw ValidationError("velocity_bound_map: epsilon must lie in (0, 0.75)");
  if (cfg.kind == VelocityKind::MMVB1) {
    if (a < 0.0) throw ValidationError("velocity_bound_map: MMVB1 needs a >= 0");
  } else {
    if (!(a > 0.0) || !(a <= cfg.t))
      throw ValidationError("velocity_bound_map: MMVB2 needs 0 < b <= t");
  }
  if (cfg.sign != 1 && cfg.sign != -1)
    throw ValidationError("velocity_bound_map: sign must be +1 or -1");

  const double width_exp = 0.25 + cfg.epsilon;
  const double band_exp = 0.25 - cfg.epsilon / 3.0;
  const double t = cfg.t;

  // MMVB1 keeps the sign-coherent outgoing side: positive position with
  // positive momentum, where the flow's phase is monotone over the kept set.
  const int side = cfg.kind == VelocityKind::MMVB1 ? +1 : cfg.sign;
  const CutoffSpec f2 = spatial_axis_signed_outside(0, side, width_exp);
  const CutoffSpec f1 = cfg.kind == VelocityKind::MMVB1
                            ? spectral_axis_signed_outside(0, +1, band_exp, 0.1)
                            : spectral_axis_signed_inside(0, +1, band_exp, 0.1);
  // exp(+iaH0) for MMVB1, exp(-ibH0) for MMVB2, in free_propagate's
  // exp(-i dt H0) convention.
  const double flow_dt = cfg.kind == VelocityKind::MMVB1 ? -a : a;
  const double band_q0 = cfg.band_q0;
  const double sigma = cfg.sigma;

  LinearMap map;
  map.forward = [=](const ComplexField& f) {
    ComplexField g = axis_weight(f, sigma);
    g = free_propagate(g, flow_dt);
    if (band_q0 > 0.0) g = apply_cutoff(g, spectral_envelope(band_q0), 1.0);
    g = apply_cutoff(g, f1, t);
    g = apply_cutoff(g, f2, t);
    return g;
  };
  map.adjoint = [=](const ComplexField& f) {
    ComplexField g = apply_cutoff(f, f2, t);
    g = apply_cutoff(g, f1, t);
    if (band_q0 > 0.0) g = apply_cutoff(g, spectral_envelope(band_q0), 1.0);
    g = free_propagate(g, -flow_dt);
    g = axis_weight(g, sigma);
    return g;
  };
  return map;
}

DiagnosticSeries velocity_bound_probe(const GridSpec& grid,
                                      const VelocityProbeConfig& cfg) {
  if (cfg.a_values.size() < 2)
    throw ValidationError("velocity_bound_probe: need at least two flow durations");
  for (std::size_t i = 1; i < cfg.a_values.size(); ++i)
    if (!(cfg.a_values[i] > cfg.a_values[i - 1]))
      throw ValidationError("velocity_bound_probe: a_values must be strictly increasing");

  DiagnosticSeries s;
  s.label = cfg.kind == VelocityKind::MMVB1 ? "velocity_bound_max" : "velocity_bound_min";
  s.scale_name = "scale";  // t^{1/4+eps} + a^{1/4}
  s.extra_names = {"a", "iterations"};
  s.reference_exponent = -cfg.sigma;

  for (double a : cfg.a_values) {
    const LinearMap map = velocity_bound_map(grid, cfg, a);
    const OpNormResult r =
        op_norm_estimate(grid, map, cfg.max_iters, cfg.rel_tol, cfg.seed);
    if (!r.converged)
      throw AbortError("velocity_bound_probe: power iteration did not converge");
    const double scale = std::pow(cfg.t, 0.25 + cfg.epsilon) + std::pow(a, 0.25);
    s.append(scale, r.value, {a, static_cast<double>(r.iterations)});
  }
  return s;
}

LinearMap commutator_map(const GridSpec& grid, double alpha, double b, double t) {
  (void)grid;  // maps are grid-agnostic; the parameter documents the domain
  if (!(alpha > 0.0) || !(b > 0.0))
    throw ValidationError("commutator_map: alpha and b must be positive");
  const CutoffSpec fc = spatial_inside_radial(alpha);
  const CutoffSpec f1 = spectral_outside_radial(b);
  LinearMap map;
  map.forward = [=](const ComplexField& f) { return commutator_apply(f, fc, f1, t); };
  // [Fc, F1] is anti-selfadjoint (both factors are real multipliers).
  map.adjoint = [=](const ComplexField& f) {
    return scaled(commutator_apply(f, fc, f1, t), -1.0);
  };
  return map;
}

DiagnosticSeries commutator_decay_probe(const GridSpec& grid, double alpha, double b,
                                        const std::vector<double>& times,
                                        std::uint64_t seed, int max_iters,
                                        double rel_tol) {
  check_times(times, "commutator_decay_probe");
  DiagnosticSeries s;
  s.label = "commutator_decay";
  s.scale_name = "t";
  s.extra_names = {"iterations"};
  s.reference_exponent = -(alpha - b);

  for (double t : times) {
    if (!(t >= 1.0))
      throw ValidationError("commutator_decay_probe: times must be >= 1");
    const LinearMap map = commutator_map(grid, alpha, b, t);
    const OpNormResult r = op_norm_estimate(grid, map, max_iters, rel_tol, seed);
    if (!r.converged)
      throw AbortError("commutator_decay_probe: power iteration did not converge");
    s.append(t, r.value, {static_cast<double>(r.iterations)});
  }
  return s;
}

std::vector<ComplexField> make_test_bank(const GridSpec& grid, int count,
                                         std::uint64_t seed) {
  if (count < 1) throw ValidationError("make_test_bank: count must be >= 1");
  std::vector<ComplexField> bank;
  Rng rng(seed);

  auto normalized = [](ComplexField f) {
    zero_nyquist(f);
    const double n = l2_norm(f);
    if (!(n > 0.0)) throw AbortError("make_test_bank: zero test state");
    for (std::size_t i = 0; i < f.size(); ++i) f[i] /= n;
    return f;
  };
  auto gaussian = [&](double width, double center0, double carrier0,
                      bool odd_factor) {
    ComplexField f(grid, FieldRep::Position);
    const int n0 = grid.points[0];
    const int n1 = grid.dim > 1 ? grid.points[1] : 1;
    const int n2 = grid.dim > 2 ? grid.points[2] : 1;
    std::size_t flat = 0;
    for (int i0 = 0; i0 < n0; ++i0)
      for (int i1 = 0; i1 < n1; ++i1)
        for (int i2 = 0; i2 < n2; ++i2, ++flat) {
          const int idx[3] = {i0, i1, i2};
          double r2 = 0.0;
          for (int a = 0; a < grid.dim; ++a) {
            const double xa = grid.x(a, idx[a]) - (a == 0 ? center0 : 0.0);
            r2 += xa * xa;
          }
          const double x0 = grid.x(0, idx[0]) - center0;
          double amp = std::exp(-r2 / (2.0 * width * width));
          if (odd_factor) amp *= x0;
          f[flat] = amp * std::exp(std::complex<double>(0.0, carrier0 * x0));
        }
    return normalized(std::move(f));
  };

  // Deterministic shapes first: centered, shifted, modulated, odd.
  if (bank.size() < static_cast<std::size_t>(count)) bank.push_back(gaussian(1.0, 0.0, 0.0, false));
  if (bank.size() < static_cast<std::size_t>(count)) bank.push_back(gaussian(2.0, 2.0, 0.0, false));
  if (bank.size() < static_cast<std::size_t>(count)) bank.push_back(gaussian(0.7, 0.0, 1.0, false));
  if (bank.size() < static_cast<std::size_t>(count)) bank.push_back(gaussian(1.2, 0.0, 0.0, true));

  // Then random bandlimited states from the seeded generator.
  const std::vector<double> env = cutoff_table(spectral_envelope(1.5), grid, 1.0);
  while (bank.size() < static_cast<std::size_t>(count)) {
    ComplexField f(grid, FieldRep::Spectrum);
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = env[i] * rng.complex_gaussian();
    bank.push_back(normalized(from_spectrum(f)));
  }
  return bank;
}

DiagnosticSeries weak_vanishing_probe(const Trajectory& traj,
                                      const std::vector<ComplexField>& bank,
                                      double alpha, double b) {
  if (bank.empty()) throw ValidationError("weak_vanishing_probe: empty test bank");
  check_channel_params(alpha, b);
  const CutoffSpec fc = spatial_inside_radial(alpha);
  const CutoffSpec f1 = spectral_outside_radial(b);

  DiagnosticSeries s;
  s.label = "weak_vanishing";
  s.scale_name = "t";
  s.extra_names = {"adjoint_bound"};

  for (double t : traj.dyadic_times()) {
    const ComplexField& psi = traj.at_time(t).field;
    const double psi_norm = l2_norm(psi);
    ComplexField phi = to_start_frame(psi, t);
    // y = (1 - Fc F1) phi.
    ComplexField y = sub(phi, apply_cutoff(apply_cutoff(phi, f1, t), fc, t));
    double pairing = 0.0, bound = 0.0;
    for (const auto& g : bank) {
      pairing = std::max(pairing, std::abs(inner_product(g, y)));
      // |<g, (1 - Fc F1) phi>| = |<(1 - F1 Fc) g, phi>| <= ||(1-F1 Fc) g|| ||psi||.
      ComplexField z = sub(g, apply_cutoff(apply_cutoff(g, fc, t), f1, t));
      bound = std::max(bound, l2_norm(z) * psi_norm);
    }
    s.append(t, pairing, {bound});
  }
  return s;
}

}  // namespace bhs
