#ifndef BHS_FIELD_HPP
#define BHS_FIELD_HPP

#include <complex>
#include <vector>

#include "bhs/errors.hpp"
#include "bhs/grid.hpp"

namespace bhs {

enum class FieldRep { Position, Spectrum };

/// Complex scalar field sampled on a GridSpec, in either representation.
/// Value semantics throughout; operations never mutate their inputs.
class ComplexField {
 public:
  ComplexField() = default;
  ComplexField(const GridSpec& grid, FieldRep rep)
      : grid_(grid), rep_(rep), samples_(grid.size(), std::complex<double>(0.0, 0.0)) {}

  const GridSpec& grid() const { return grid_; }
  FieldRep rep() const { return rep_; }
  void set_rep(FieldRep r) { rep_ = r; }

  std::size_t size() const { return samples_.size(); }
  std::complex<double>& operator[](std::size_t i) { return samples_[i]; }
  const std::complex<double>& operator[](std::size_t i) const { return samples_[i]; }
  std::complex<double>* data() { return samples_.data(); }
  const std::complex<double>* data() const { return samples_.data(); }
  std::vector<std::complex<double>>& samples() { return samples_; }
  const std::vector<std::complex<double>>& samples() const { return samples_; }

 private:
  GridSpec grid_;
  FieldRep rep_ = FieldRep::Position;
  std::vector<std::complex<double>> samples_;
};

inline void require_same_shape(const ComplexField& a, const ComplexField& b) {
  if (!(a.grid() == b.grid()) || a.rep() != b.rep())
    throw ValidationError("fields must share grid and representation");
}

inline ComplexField add(const ComplexField& a, const ComplexField& b) {
  require_same_shape(a, b);
  ComplexField out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += b[i];
  return out;
}

inline ComplexField sub(const ComplexField& a, const ComplexField& b) {
  require_same_shape(a, b);
  ComplexField out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] -= b[i];
  return out;
}

inline ComplexField scaled(const ComplexField& a, std::complex<double> z) {
  ComplexField out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= z;
  return out;
}

}  // namespace bhs

#endif
