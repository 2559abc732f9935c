#include "bhs/wave_operators.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>

#include "bhs/cutoff.hpp"
#include "bhs/errors.hpp"
#include "bhs/spectral.hpp"

namespace bhs {

ComplexField to_start_frame(const ComplexField& psi_t, double t) {
  if (!(t >= 1.0)) throw ValidationError("to_start_frame: t must be >= 1");
  return free_propagate(psi_t, -(t - 1.0));
}

ComplexField from_start_frame(const ComplexField& phi, double t) {
  if (!(t >= 1.0)) throw ValidationError("from_start_frame: t must be >= 1");
  return free_propagate(phi, t - 1.0);
}

void check_channel_params(double alpha, double b) {
  char buf[160];
  if (!(b > 0.0 && b < alpha)) {
    std::snprintf(buf, sizeof buf,
                  "channel params need 0 < b < alpha, got alpha=%g b=%g", alpha, b);
    throw ValidationError(buf);
  }
  if (!(alpha + 3.0 * b < 1.0)) {
    std::snprintf(buf, sizeof buf,
                  "channel params need alpha + 3b < 1, got alpha=%g b=%g", alpha, b);
    throw ValidationError(buf);
  }
}

ComplexField free_channel_state(const ComplexField& psi_t, double t, double alpha,
                                double b) {
  check_channel_params(alpha, b);
  ComplexField phi = to_start_frame(psi_t, t);
  phi = apply_cutoff(phi, spectral_outside_radial(b), t);
  phi = apply_cutoff(phi, spatial_inside_radial(alpha), t);
  return phi;
}

ComplexField free_channel_state_spatial_only(const ComplexField& psi_t, double t,
                                             double alpha) {
  if (!(alpha > 0.0)) throw ValidationError("channel params need alpha > 0");
  ComplexField phi = to_start_frame(psi_t, t);
  phi = apply_cutoff(phi, spatial_inside_radial(alpha), t);
  return phi;
}

ComplexField scattered_remainder(const Trajectory& traj, double t) {
  const Sample& s = traj.at_time(t);
  return sub(s.field, free_reference(traj.initial(), t));
}

namespace {

std::vector<double> cauchy_pairs(const std::vector<double>& dyadic) {
  std::vector<double> base;
  for (double t : dyadic)
    if (std::find_if(dyadic.begin(), dyadic.end(), [&](double u) {
          return std::abs(u - 2.0 * t) < 1e-9;
        }) != dyadic.end())
      base.push_back(t);
  return base;
}

DiagnosticSeries cauchy_series_of(const Trajectory& traj, const std::string& label,
                                  const std::function<ComplexField(double)>& state_at) {
  DiagnosticSeries s;
  s.label = label;
  s.scale_name = "t";
  const std::vector<double> dyadic = traj.dyadic_times();
  const std::vector<double> base = cauchy_pairs(dyadic);
  if (base.size() < 2)
    throw ValidationError(label + ": need at least two dyadic pairs (t, 2t)");
  for (double t : base) {
    const ComplexField at = state_at(t);
    const ComplexField at2 = state_at(2.0 * t);
    s.append(t, l2_norm(sub(at2, at)));
  }
  return s;
}

}  // namespace

DiagnosticSeries free_channel_cauchy_series(const Trajectory& traj, double alpha,
                                            double b) {
  return cauchy_series_of(traj, "free_channel_cauchy", [&](double t) {
    return free_channel_state(traj.at_time(t).field, t, alpha, b);
  });
}

DiagnosticSeries free_channel_cauchy_series_spatial(const Trajectory& traj,
                                                    double alpha) {
  return cauchy_series_of(traj, "free_channel_cauchy_spatial", [&](double t) {
    return free_channel_state_spatial_only(traj.at_time(t).field, t, alpha);
  });
}

FreeProfile asymptotic_free_profile(const Trajectory& traj, double alpha, double b) {
  check_channel_params(alpha, b);
  auto remainder_channel = [&](double t) {
    ComplexField phi_d = to_start_frame(scattered_remainder(traj, t), t);
    phi_d = apply_cutoff(phi_d, spectral_outside_radial(b), t);
    phi_d = apply_cutoff(phi_d, spatial_inside_radial(alpha), t);
    return phi_d;
  };
  FreeProfile out;
  out.residuals =
      cauchy_series_of(traj, "asymptotic_profile_cauchy", remainder_channel);
  const std::vector<double> dyadic = traj.dyadic_times();
  const double T = dyadic.back();
  out.phi_plus = add(traj.initial(), remainder_channel(T));
  return out;
}

WeaklyLocalized weakly_localized_part(const Trajectory& traj, double t,
                                      double alpha_w, double epsilon) {
  if (!(alpha_w > 0.0)) throw ValidationError("weakly_localized: alpha_w must be > 0");
  if (!(epsilon > 0.0)) throw ValidationError("weakly_localized: epsilon must be > 0");
  const GridSpec& grid = traj.initial().grid();
  const double width_exp = 0.25 + epsilon;

  // Outside-cutoff remainder in the lab frame.
  ComplexField phi_d = to_start_frame(scattered_remainder(traj, t), t);
  phi_d = apply_cutoff(phi_d, spatial_outside_radial(alpha_w), t);
  ComplexField u = from_start_frame(phi_d, t);

  WeaklyLocalized out;
  out.outside_norm = l2_norm(u);

  // core = prod_l F2bar(|x_l| <= t^{1/4+eps}) u
  ComplexField core = u;
  for (int axis = 0; axis < grid.dim; ++axis)
    core = apply_cutoff(core, spatial_axis_abs_inside(axis, width_exp), t);
  out.core = core;

  // leaks: F_{2,t}(+-x_j > s) u with the telescoped prefix product.
  ComplexField prefix = u;  // prod_{l<j} F2bar applied so far
  for (int axis = 0; axis < grid.dim; ++axis) {
    for (int sign : {+1, -1}) {
      ComplexField leak =
          apply_cutoff(prefix, spatial_axis_signed_outside(axis, sign, width_exp), t);
      out.leaks.push_back(std::move(leak));
      char name[16];
      std::snprintf(name, sizeof name, "x%d%c", axis, sign > 0 ? '+' : '-');
      out.leak_names.emplace_back(name);
    }
    prefix = apply_cutoff(prefix, spatial_axis_abs_inside(axis, width_exp), t);
  }

  // prefix now equals the core; the partition core + sum leaks must equal u.
  ComplexField recon = out.core;
  for (const auto& leak : out.leaks) recon = add(recon, leak);
  out.partition_defect = l2_norm(sub(recon, u));
  return out;
}

DiagnosticSeries directional_leakage_probe(const Trajectory& traj, double epsilon,
                                           double alpha_w) {
  const GridSpec& grid = traj.initial().grid();
  DiagnosticSeries s;
  s.label = "directional_leakage";
  s.scale_name = "t";
  for (int axis = 0; axis < grid.dim; ++axis)
    for (const char* sgn : {"+", "-"})
      s.extra_names.push_back("leak_x" + std::to_string(axis) + sgn);
  s.extra_names.push_back("bessel_ratio");
  s.extra_names.push_back("core_norm");

  for (double t : traj.dyadic_times()) {
    if (t <= 1.0 + 1e-9) continue;  // psi_d(1) = 0 identically
    const WeaklyLocalized w = weakly_localized_part(traj, t, alpha_w, epsilon);
    std::vector<double> extra;
    double peak = 0.0, sq = 0.0;
    for (const auto& leak : w.leaks) {
      const double n = l2_norm(leak);
      extra.push_back(n);
      peak = std::max(peak, n);
      sq += n * n;
    }
    const double un = w.outside_norm;
    extra.push_back(un > 0.0 ? sq / (un * un) : 0.0);
    extra.push_back(l2_norm(w.core));
    s.append(t, peak, extra);
  }
  return s;
}

}  // namespace bhs
