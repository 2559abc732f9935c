#ifndef BHS_CUTOFF_HPP
#define BHS_CUTOFF_HPP

#include <vector>

#include "bhs/field.hpp"

namespace bhs {

enum class CutoffDomain { Space, Spectrum };
enum class CutoffShape { Radial, AxisAbs, AxisSigned };
// Inside: 1 on small arguments, 0 outside (a "<= threshold" window).
// Outside: 0 on small arguments, 1 outside (a "> threshold" window).
enum class CutoffSide { Inside, Outside };

/// Smooth phase-space window with a moving threshold scale.
///
/// The profile argument is k = lambda / (c * a(t)) for spatial windows and
/// k = lambda * a(t) / c for spectral ones, where a(t) = t^exponent (or a
/// fixed scale), c is a constant offset, and lambda is |x|, |x_j| or
/// sign*x_j per shape (same with q). Inside profiles are 1 - S(k), outside
/// profiles S(k), with plateau edges at k = 1/2 and k = 1.
struct CutoffSpec {
  CutoffDomain domain = CutoffDomain::Space;
  CutoffShape shape = CutoffShape::Radial;
  CutoffSide side = CutoffSide::Inside;
  int axis = 0;
  int sign = +1;              // AxisSigned only
  double exponent = 0.0;      // a(t) = t^exponent when time_scaled
  bool time_scaled = true;
  double fixed_scale = 1.0;   // a(t) when !time_scaled
  double threshold = 1.0;     // constant offset c

  double scale(double t) const;
  double argument(double lambda, double t) const;
  /// Profile value at coordinate lambda.
  double value(double lambda, double t) const;
  /// Exact d/dt of the profile (chain rule through a(t); zero when fixed).
  double ddt(double lambda, double t) const;
};

// The recurring window families.
CutoffSpec spatial_inside_radial(double alpha);          // 1 on |x| <= t^alpha/2
CutoffSpec spatial_outside_radial(double alpha);         // 1 on |x| >= t^alpha
CutoffSpec spectral_outside_radial(double b);            // 1 on t^b |q| >= 1
CutoffSpec spectral_inside_radial(double b);             // complement of the above
CutoffSpec spatial_axis_abs_inside(int axis, double expnt);
CutoffSpec spatial_axis_abs_outside(int axis, double expnt);
CutoffSpec spatial_axis_signed_outside(int axis, int sign, double expnt);
CutoffSpec spectral_axis_signed_outside(int axis, int sign, double expnt, double threshold);
CutoffSpec spectral_axis_signed_inside(int axis, int sign, double expnt, double threshold);
/// Fixed spectral envelope: 1 on |q| <= q0/2, 0 on |q| >= q0.
CutoffSpec spectral_envelope(double q0);

/// Coordinate lambda of a lattice point for this window's shape/domain.
double cutoff_lambda(const CutoffSpec& c, const GridSpec& g, int i0, int i1, int i2);

/// Tabulated profile over the lattice (position or wavenumber per domain).
std::vector<double> cutoff_table(const CutoffSpec& c, const GridSpec& g, double t);
std::vector<double> cutoff_ddt_table(const CutoffSpec& c, const GridSpec& g, double t);
std::vector<double> cutoff_sqrt_table(const CutoffSpec& c, const GridSpec& g, double t);

/// Multiply f by the window (through the spectrum for spectral windows).
/// Requires t >= 1; representation of f is preserved.
ComplexField apply_cutoff(const ComplexField& f, const CutoffSpec& c, double t);
ComplexField apply_cutoff_ddt(const ComplexField& f, const CutoffSpec& c, double t);
ComplexField apply_cutoff_sqrt(const ComplexField& f, const CutoffSpec& c, double t);

/// [A, B] f = A(B f) - B(A f).
ComplexField commutator_apply(const ComplexField& f, const CutoffSpec& a, const CutoffSpec& b,
                              double t);

}  // namespace bhs

#endif
