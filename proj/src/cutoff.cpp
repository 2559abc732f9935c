#include "bhs/cutoff.hpp"

#include <cmath>
#include <cstdlib>

#include "bhs/errors.hpp"
#include "bhs/smooth_step.hpp"
#include "bhs/spectral.hpp"

namespace bhs {

namespace {

void check_spec(const CutoffSpec& c, const GridSpec& g, double t) {
  if (t < 1.0) throw ValidationError("cutoff: time must be >= 1");
  if (c.threshold <= 0.0) throw ValidationError("cutoff: threshold must be positive");
  if (!c.time_scaled && c.fixed_scale <= 0.0)
    throw ValidationError("cutoff: fixed scale must be positive");
  if (c.shape != CutoffShape::Radial && (c.axis < 0 || c.axis >= g.dim))
    throw ValidationError("cutoff: axis out of range");
  if (c.shape == CutoffShape::AxisSigned && c.sign != 1 && c.sign != -1)
    throw ValidationError("cutoff: sign must be +1 or -1");
}

}  // namespace

double CutoffSpec::scale(double t) const {
  return time_scaled ? std::pow(t, exponent) : fixed_scale;
}

double CutoffSpec::argument(double lambda, double t) const {
  const double a = scale(t);
  return domain == CutoffDomain::Space ? lambda / (threshold * a) : lambda * a / threshold;
}

double CutoffSpec::value(double lambda, double t) const {
  const double s = smooth_step(argument(lambda, t));
  return side == CutoffSide::Outside ? s : 1.0 - s;
}

double CutoffSpec::ddt(double lambda, double t) const {
  if (!time_scaled || exponent == 0.0) return 0.0;
  const double k = argument(lambda, t);
  // d/dt S(k(t)) = S'(k) * dk/dt with dk/dt = -(e/t) k (space) or +(e/t) k
  // (spectrum); the Inside profile flips the overall sign once more.
  double v = smooth_step_deriv(k) * k * (exponent / t);
  if (domain == CutoffDomain::Space) v = -v;
  if (side == CutoffSide::Inside) v = -v;
  return v;
}

CutoffSpec spatial_inside_radial(double alpha) {
  CutoffSpec c;
  c.domain = CutoffDomain::Space;
  c.shape = CutoffShape::Radial;
  c.side = CutoffSide::Inside;
  c.exponent = alpha;
  c.threshold = 1.0;
  return c;
}

CutoffSpec spatial_outside_radial(double alpha) {
  CutoffSpec c = spatial_inside_radial(alpha);
  c.side = CutoffSide::Outside;
  return c;
}

CutoffSpec spectral_outside_radial(double b) {
  CutoffSpec c;
  c.domain = CutoffDomain::Spectrum;
  c.shape = CutoffShape::Radial;
  c.side = CutoffSide::Outside;
  c.exponent = b;
  c.threshold = 1.0;
  return c;
}

CutoffSpec spectral_inside_radial(double b) {
  CutoffSpec c = spectral_outside_radial(b);
  c.side = CutoffSide::Inside;
  return c;
}

CutoffSpec spatial_axis_abs_inside(int axis, double expnt) {
  CutoffSpec c = spatial_inside_radial(expnt);
  c.shape = CutoffShape::AxisAbs;
  c.axis = axis;
  return c;
}

CutoffSpec spatial_axis_abs_outside(int axis, double expnt) {
  CutoffSpec c = spatial_axis_abs_inside(axis, expnt);
  c.side = CutoffSide::Outside;
  return c;
}

CutoffSpec spatial_axis_signed_outside(int axis, int sign, double expnt) {
  CutoffSpec c = spatial_axis_abs_outside(axis, expnt);
  c.shape = CutoffShape::AxisSigned;
  c.sign = sign;
  return c;
}

CutoffSpec spectral_axis_signed_outside(int axis, int sign, double expnt, double threshold) {
  CutoffSpec c = spectral_outside_radial(expnt);
  c.shape = CutoffShape::AxisSigned;
  c.axis = axis;
  c.sign = sign;
  c.threshold = threshold;
  return c;
}

CutoffSpec spectral_axis_signed_inside(int axis, int sign, double expnt, double threshold) {
  CutoffSpec c = spectral_axis_signed_outside(axis, sign, expnt, threshold);
  c.side = CutoffSide::Inside;
  return c;
}

CutoffSpec spectral_envelope(double q0) {
  if (q0 <= 0.0) throw ValidationError("spectral_envelope: q0 must be positive");
  CutoffSpec c;
  c.domain = CutoffDomain::Spectrum;
  c.shape = CutoffShape::Radial;
  c.side = CutoffSide::Inside;
  c.time_scaled = false;
  c.fixed_scale = 1.0;
  c.threshold = q0;
  return c;
}

double cutoff_lambda(const CutoffSpec& c, const GridSpec& g, int i0, int i1, int i2) {
  const bool space = c.domain == CutoffDomain::Space;
  auto coord = [&](int a, int i) { return space ? g.x(a, i) : g.q(a, i); };
  switch (c.shape) {
    case CutoffShape::Radial: {
      double s = 0.0;
      const int idx[3] = {i0, i1, i2};
      for (int a = 0; a < g.dim; ++a) {
        const double v = coord(a, idx[a]);
        s += v * v;
      }
      return std::sqrt(s);
    }
    case CutoffShape::AxisAbs: {
      const int idx[3] = {i0, i1, i2};
      return std::abs(coord(c.axis, idx[c.axis]));
    }
    case CutoffShape::AxisSigned: {
      const int idx[3] = {i0, i1, i2};
      return c.sign * coord(c.axis, idx[c.axis]);
    }
  }
  throw ValidationError("cutoff: unknown shape");
}

namespace {

template <class Fn>
std::vector<double> tabulate(const CutoffSpec& c, const GridSpec& g, double t, Fn&& fn) {
  check_spec(c, g, t);
  std::vector<double> table(static_cast<size_t>(g.size()));
  const int n0 = g.points[0];
  const int n1 = g.dim > 1 ? g.points[1] : 1;
  const int n2 = g.dim > 2 ? g.points[2] : 1;
  size_t flat = 0;
  for (int i0 = 0; i0 < n0; ++i0)
    for (int i1 = 0; i1 < n1; ++i1)
      for (int i2 = 0; i2 < n2; ++i2, ++flat)
        table[flat] = fn(cutoff_lambda(c, g, i0, i1, i2));
  return table;
}

ComplexField apply_table(const ComplexField& f, const CutoffSpec& c,
                         const std::vector<double>& table) {
  const FieldRep want =
      c.domain == CutoffDomain::Space ? FieldRep::Position : FieldRep::Spectrum;
  ComplexField out = f.rep() == want
                         ? f
                         : (want == FieldRep::Spectrum ? to_spectrum(f) : from_spectrum(f));
  for (size_t i = 0; i < table.size(); ++i) out[i] *= table[i];
  if (out.rep() != f.rep())
    out = f.rep() == FieldRep::Spectrum ? to_spectrum(out) : from_spectrum(out);
  return out;
}

}  // namespace

std::vector<double> cutoff_table(const CutoffSpec& c, const GridSpec& g, double t) {
  return tabulate(c, g, t, [&](double lam) { return c.value(lam, t); });
}

std::vector<double> cutoff_ddt_table(const CutoffSpec& c, const GridSpec& g, double t) {
  return tabulate(c, g, t, [&](double lam) { return c.ddt(lam, t); });
}

std::vector<double> cutoff_sqrt_table(const CutoffSpec& c, const GridSpec& g, double t) {
  return tabulate(c, g, t, [&](double lam) { return std::sqrt(c.value(lam, t)); });
}

ComplexField apply_cutoff(const ComplexField& f, const CutoffSpec& c, double t) {
  return apply_table(f, c, cutoff_table(c, f.grid(), t));
}

ComplexField apply_cutoff_ddt(const ComplexField& f, const CutoffSpec& c, double t) {
  return apply_table(f, c, cutoff_ddt_table(c, f.grid(), t));
}

ComplexField apply_cutoff_sqrt(const ComplexField& f, const CutoffSpec& c, double t) {
  return apply_table(f, c, cutoff_sqrt_table(c, f.grid(), t));
}

ComplexField commutator_apply(const ComplexField& f, const CutoffSpec& a, const CutoffSpec& b,
                              double t) {
  ComplexField ab = apply_cutoff(apply_cutoff(f, b, t), a, t);
  ComplexField ba = apply_cutoff(apply_cutoff(f, a, t), b, t);
  return sub(ab, ba);
}

}  // namespace bhs
