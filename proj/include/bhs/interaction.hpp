#ifndef BHS_INTERACTION_HPP
#define BHS_INTERACTION_HPP

#include <array>
#include <complex>

namespace bhs {

enum class InteractionKind { None, LinearLocalized, PowerNonlinear, Sum };
enum class Modulation { Constant, Cosine, SwitchOn };

/// The interaction term N(x, t, |psi|) multiplying psi in the equation
/// i d/dt psi = (-Lap)^2 psi + N psi.
///
/// LinearLocalized: (amplitude + i*amplitude_imag) * m(t) * (1+|x|^2)^(-sigma/2)
/// PowerNonlinear:  coupling * |psi|^(power-1)
/// Sum:             both terms added.
struct InteractionSpec {
  InteractionKind kind = InteractionKind::None;

  double amplitude = 0.0;
  double amplitude_imag = 0.0;
  double sigma = 2.0;
  Modulation modulation = Modulation::Constant;
  double omega = 0.0;        // Cosine: m(t) = cos(omega * t)
  double switch_time = 4.0;  // SwitchOn: m(t) ramps 0 -> 1 over [T/2, T]

  double coupling = 0.0;
  double power = 3.0;

  bool has_linear() const {
    return kind == InteractionKind::LinearLocalized || kind == InteractionKind::Sum;
  }
  bool has_power() const {
    return kind == InteractionKind::PowerNonlinear || kind == InteractionKind::Sum;
  }
  /// True when the generated phase is not purely real (norm not conserved).
  bool is_complex() const { return has_linear() && amplitude_imag != 0.0; }
  bool is_time_dependent() const {
    return has_linear() && modulation != Modulation::Constant;
  }
};

void validate_interaction(const InteractionSpec& s);

double modulation_value(const InteractionSpec& s, double t);

/// Pointwise value of N at position x, time t, local amplitude |psi|.
std::complex<double> interaction_eval(const InteractionSpec& s, const std::array<double, 3>& x,
                                      int dim, double t, double abs_psi);

/// N(x, t, |psi|) psi over the whole grid; psi must be in position rep.
class ComplexField;
ComplexField interaction_apply(const InteractionSpec& s, const ComplexField& psi,
                               double t);

/// The linear summand alone (modulated localized potential); the power term
/// is dropped. Used by probes that measure the potential's decay channel.
InteractionSpec linear_part(const InteractionSpec& s);

}  // namespace bhs

#endif
