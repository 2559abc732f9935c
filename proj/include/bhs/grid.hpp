#ifndef BHS_GRID_HPP
#define BHS_GRID_HPP

#include <array>
#include <cstddef>

namespace bhs {

/// Periodic sampling lattice for a centered box [-L/2, L/2)^dim.
///
/// Per-axis sample counts must be powers of two (>= 16 each). Position nodes
/// are x_i = (i - N/2) dx so the origin is an actual grid point; wavenumbers
/// follow standard DFT ordering (0, dq, ..., -N/2 dq, ..., -dq), symmetric up
/// to the single Nyquist mode at -pi/dx.
struct GridSpec {
  int dim = 1;
  std::array<int, 3> points{1, 1, 1};
  std::array<double, 3> box_length{0.0, 0.0, 0.0};

  double dx(int axis) const { return box_length[axis] / points[axis]; }
  double dq(int axis) const;  // 2*pi / box_length
  double max_abs_q(int axis) const;  // pi / dx

  std::size_t size() const {
    std::size_t n = 1;
    for (int a = 0; a < dim; ++a) n *= static_cast<std::size_t>(points[a]);
    return n;
  }
  /// Product of the per-axis dx (position quadrature weight).
  double cell_volume() const;
  /// Product of the per-axis dq/(2*pi) (spectral quadrature weight).
  double spectral_cell() const;

  /// Position coordinate of index i along an axis, measured from box center.
  double x(int axis, int index) const { return (index - points[axis] / 2) * dx(axis); }
  /// Signed wavenumber of index m along an axis in DFT ordering.
  double q(int axis, int index) const {
    const int n = points[axis];
    const int k = (index < n / 2) ? index : index - n;
    return k * dq(axis);
  }

  bool operator==(const GridSpec&) const = default;
};

/// Uniform grid: same sample count and box length on every axis.
/// Throws ValidationError on bad dim, non power-of-two or undersized counts,
/// or nonpositive lengths.
GridSpec make_grid(int dim, int points, double box_length);
GridSpec make_grid(int dim, const std::array<int, 3>& points,
                   const std::array<double, 3>& box_length);

/// Decompose a row-major flat index into per-axis indices (idx[3], unused 0).
inline void unflatten(const GridSpec& g, std::size_t flat, int idx[3]) {
  idx[1] = idx[2] = 0;
  if (g.dim == 3) {
    idx[2] = static_cast<int>(flat % g.points[2]);
    flat /= g.points[2];
  }
  if (g.dim >= 2) {
    idx[1] = static_cast<int>(flat % g.points[1]);
    flat /= g.points[1];
  }
  idx[0] = static_cast<int>(flat);
}

}  // namespace bhs

#endif
