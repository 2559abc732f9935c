#include "bhs/spectral.hpp"

#include <cmath>

#include "bhs/fft_backend.hpp"

namespace bhs {

namespace {

template <class F>
void for_each_index(const GridSpec& g, F&& fn) {
  const int n0 = g.points[0], n1 = g.points[1], n2 = g.points[2];
  std::size_t flat = 0;
  for (int i0 = 0; i0 < n0; ++i0)
    for (int i1 = 0; i1 < n1; ++i1)
      for (int i2 = 0; i2 < n2; ++i2, ++flat) fn(i0, i1, i2, flat);
}

// (-1)^{i0+i1+i2}: carries the centered-origin phase exp(-i q.x0) exactly.
inline double parity(int i0, int i1, int i2) { return ((i0 + i1 + i2) & 1) ? -1.0 : 1.0; }

}  // namespace

ComplexField to_spectrum(const ComplexField& f) {
  if (f.rep() != FieldRep::Position) throw ValidationError("to_spectrum expects position rep");
  ComplexField out = f;
  fft::forward(out.grid(), out.data());
  const double vol = out.grid().cell_volume();
  for_each_index(out.grid(), [&](int i0, int i1, int i2, std::size_t k) {
    out[k] *= vol * parity(i0, i1, i2);
  });
  out.set_rep(FieldRep::Spectrum);
  return out;
}

ComplexField from_spectrum(const ComplexField& f) {
  if (f.rep() != FieldRep::Spectrum) throw ValidationError("from_spectrum expects spectrum rep");
  ComplexField out = f;
  const double scale = 1.0 / (out.grid().cell_volume() * static_cast<double>(out.grid().size()));
  for_each_index(out.grid(), [&](int i0, int i1, int i2, std::size_t k) {
    out[k] *= scale * parity(i0, i1, i2);
  });
  fft::backward(out.grid(), out.data());
  out.set_rep(FieldRep::Position);
  return out;
}

ComplexField apply_multiplier(const ComplexField& f, const SpectralSymbol& m) {
  const bool from_position = (f.rep() == FieldRep::Position);
  ComplexField s = from_position ? to_spectrum(f) : f;
  const GridSpec& g = s.grid();
  for_each_index(g, [&](int i0, int i1, int i2, std::size_t k) {
    std::array<double, 3> q{g.q(0, i0), 0.0, 0.0};
    if (g.dim >= 2) q[1] = g.q(1, i1);
    if (g.dim == 3) q[2] = g.q(2, i2);
    const std::complex<double> v = m(q);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw AbortError("multiplier evaluated non-finite on the q-lattice");
    s[k] *= v;
  });
  return from_position ? from_spectrum(s) : s;
}

ComplexField apply_position_weight(const ComplexField& f, const PositionWeight& w) {
  const bool from_spec = (f.rep() == FieldRep::Spectrum);
  ComplexField p = from_spec ? from_spectrum(f) : f;
  const GridSpec& g = p.grid();
  for_each_index(g, [&](int i0, int i1, int i2, std::size_t k) {
    std::array<double, 3> x{g.x(0, i0), 0.0, 0.0};
    if (g.dim >= 2) x[1] = g.x(1, i1);
    if (g.dim == 3) x[2] = g.x(2, i2);
    const std::complex<double> v = w(x);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw AbortError("position weight evaluated non-finite on the lattice");
    p[k] *= v;
  });
  return from_spec ? to_spectrum(p) : p;
}

ComplexField free_propagate(const ComplexField& f, double dt) {
  const bool from_position = (f.rep() == FieldRep::Position);
  ComplexField s = from_position ? to_spectrum(f) : f;
  const GridSpec& g = s.grid();
  for_each_index(g, [&](int i0, int i1, int i2, std::size_t k) {
    double q2 = g.q(0, i0) * g.q(0, i0);
    if (g.dim >= 2) q2 += g.q(1, i1) * g.q(1, i1);
    if (g.dim == 3) q2 += g.q(2, i2) * g.q(2, i2);
    const double phase = -dt * q2 * q2;
    s[k] *= std::complex<double>(std::cos(phase), std::sin(phase));
  });
  return from_position ? from_spectrum(s) : s;
}

void zero_nyquist(ComplexField& f) {
  const bool was_position = (f.rep() == FieldRep::Position);
  ComplexField s = was_position ? to_spectrum(f) : f;
  const GridSpec& g = s.grid();
  for_each_index(g, [&](int i0, int i1, int i2, std::size_t k) {
    const int idx[3] = {i0, i1, i2};
    for (int a = 0; a < g.dim; ++a)
      if (idx[a] == g.points[a] / 2) {
        s[k] = 0.0;
        break;
      }
  });
  f = was_position ? from_spectrum(s) : s;
}

double norms_and_moments(const ComplexField& f, NormKind kind, double sigma) {
  const GridSpec& g = f.grid();
  switch (kind) {
    case NormKind::L2: {
      const double w = (f.rep() == FieldRep::Position) ? g.cell_volume() : g.spectral_cell();
      double s = 0.0;
      for (std::size_t k = 0; k < f.size(); ++k) s += std::norm(f[k]);
      return std::sqrt(s * w);
    }
    case NormKind::Sup: {
      if (f.rep() != FieldRep::Position) throw ValidationError("sup requires position rep");
      double m = 0.0;
      for (std::size_t k = 0; k < f.size(); ++k) m = std::max(m, std::abs(f[k]));
      return m;
    }
    case NormKind::WeightSigma:
    case NormKind::AbsXMoment: {
      if (f.rep() != FieldRep::Position)
        throw ValidationError("weighted norms require position rep");
      if (kind == NormKind::WeightSigma && sigma < 0.0)
        throw ValidationError("weight exponent must be nonnegative");
      const double vol = g.cell_volume();
      double s = 0.0;
      for_each_index(g, [&](int i0, int i1, int i2, std::size_t k) {
        double x2 = g.x(0, i0) * g.x(0, i0);
        if (g.dim >= 2) x2 += g.x(1, i1) * g.x(1, i1);
        if (g.dim == 3) x2 += g.x(2, i2) * g.x(2, i2);
        if (kind == NormKind::WeightSigma)
          s += std::pow(1.0 + x2, sigma) * std::norm(f[k]);
        else
          s += std::sqrt(x2) * std::norm(f[k]);
      });
      return (kind == NormKind::WeightSigma) ? std::sqrt(s * vol) : s * vol;
    }
  }
  throw ValidationError("unknown norm kind");
}

std::complex<double> inner_product(const ComplexField& a, const ComplexField& b) {
  require_same_shape(a, b);
  const double w =
      (a.rep() == FieldRep::Position) ? a.grid().cell_volume() : a.grid().spectral_cell();
  std::complex<double> s(0.0, 0.0);
  for (std::size_t k = 0; k < a.size(); ++k) s += std::conj(a[k]) * b[k];
  return s * w;
}

}  // namespace bhs
