#ifndef BHS_SPECTRAL_HPP
#define BHS_SPECTRAL_HPP

#include <functional>

#include "bhs/field.hpp"

namespace bhs {

/// Symbol on the wavenumber lattice; q holds the signed components
/// (unused axes are zero).
using SpectralSymbol = std::function<std::complex<double>(const std::array<double, 3>& q)>;

/// Weight on the position lattice; x is measured from the box center.
using PositionWeight = std::function<std::complex<double>(const std::array<double, 3>& x)>;

/// Discrete analogue of f^(q) = \int f(x) exp(-i q.x) dx.
/// Unitary in the sense ||f||_2(dx) = ||f^||_2(dq/2pi); spectrum samples
/// approximate the continuum transform at lattice wavenumbers.
ComplexField to_spectrum(const ComplexField& f);

/// Inverse of to_spectrum (round trip is exact to FFT precision).
ComplexField from_spectrum(const ComplexField& f);

/// m(P) f via the spectrum. Accepts either representation and returns the
/// input's representation. Throws AbortError if m evaluates non-finite.
ComplexField apply_multiplier(const ComplexField& f, const SpectralSymbol& m);

/// Pointwise weight in position space, returned in the input's rep.
ComplexField apply_position_weight(const ComplexField& f, const PositionWeight& w);

/// exp(-i dt |q|^4) f: the free quartic-dispersion flow over time dt.
/// dt may be negative (backward flow). Preserves the representation.
ComplexField free_propagate(const ComplexField& f, double dt);

/// Zero the Nyquist planes (index N/2 on any axis). Used at initialization
/// so the lattice spectrum is symmetric.
void zero_nyquist(ComplexField& f);

enum class NormKind { L2, Sup, WeightSigma, AbsXMoment };

/// l2: either rep, with its own measure. sup, weight_sigma(sigma >= 0) and
/// abs_x_moment require position rep; weight_sigma is || <x>^sigma f ||_2,
/// abs_x_moment is sum |x| |f|^2 dx.
double norms_and_moments(const ComplexField& f, NormKind kind, double sigma = 0.0);

inline double l2_norm(const ComplexField& f) { return norms_and_moments(f, NormKind::L2); }
inline double sup_norm(const ComplexField& f) { return norms_and_moments(f, NormKind::Sup); }

/// <a, b> = sum conj(a) b * measure; conjugate-linear in the first slot.
std::complex<double> inner_product(const ComplexField& a, const ComplexField& b);

}  // namespace bhs

#endif
