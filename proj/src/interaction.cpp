#include "bhs/interaction.hpp"

#include <cmath>

#include "bhs/errors.hpp"
#include "bhs/field.hpp"
#include "bhs/smooth_step.hpp"

namespace bhs {

void validate_interaction(const InteractionSpec& s) {
  if (s.has_linear()) {
    if (s.sigma <= 0.0) throw ValidationError("interaction: sigma must be positive");
    if (s.modulation == Modulation::SwitchOn && s.switch_time <= 0.0)
      throw ValidationError("interaction: switch_time must be positive");
  }
  if (s.has_power() && s.power < 1.0)
    throw ValidationError("interaction: power must be >= 1");
}

double modulation_value(const InteractionSpec& s, double t) {
  switch (s.modulation) {
    case Modulation::Constant:
      return 1.0;
    case Modulation::Cosine:
      return std::cos(s.omega * t);
    case Modulation::SwitchOn:
      return smooth_step(t / s.switch_time);
  }
  return 1.0;
}

std::complex<double> interaction_eval(const InteractionSpec& s, const std::array<double, 3>& x,
                                      int dim, double t, double abs_psi) {
  std::complex<double> v(0.0, 0.0);
  if (s.has_linear()) {
    double r2 = 0.0;
    for (int a = 0; a < dim; ++a) r2 += x[a] * x[a];
    const double envelope = std::pow(1.0 + r2, -0.5 * s.sigma);
    v += std::complex<double>(s.amplitude, s.amplitude_imag) * (modulation_value(s, t) * envelope);
  }
  if (s.has_power()) v += s.coupling * std::pow(abs_psi, s.power - 1.0);
  return v;
}

ComplexField interaction_apply(const InteractionSpec& s, const ComplexField& psi,
                               double t) {
  if (psi.rep() != FieldRep::Position)
    throw ValidationError("interaction_apply: psi must be in position representation");
  const GridSpec& g = psi.grid();
  ComplexField out = psi;
  const int n0 = g.points[0];
  const int n1 = g.dim > 1 ? g.points[1] : 1;
  const int n2 = g.dim > 2 ? g.points[2] : 1;
  std::size_t flat = 0;
  for (int i0 = 0; i0 < n0; ++i0)
    for (int i1 = 0; i1 < n1; ++i1)
      for (int i2 = 0; i2 < n2; ++i2, ++flat) {
        const int idx[3] = {i0, i1, i2};
        std::array<double, 3> x{0.0, 0.0, 0.0};
        for (int a = 0; a < g.dim; ++a) x[a] = g.x(a, idx[a]);
        out[flat] *= interaction_eval(s, x, g.dim, t, std::abs(psi[flat]));
      }
  return out;
}

InteractionSpec linear_part(const InteractionSpec& s) {
  InteractionSpec lin = s;
  lin.coupling = 0.0;
  lin.kind = s.has_linear() ? InteractionKind::LinearLocalized : InteractionKind::None;
  return lin;
}

}  // namespace bhs
