#include "bhs/grid.hpp"

#include <cmath>
#include <string>

#include "bhs/errors.hpp"

namespace bhs {

namespace {

bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

void check_axis(int n, double len) {
  if (!power_of_two(n) || n < 16)
    throw ValidationError("grid points must be a power of two >= 16, got " + std::to_string(n));
  if (!(len > 0.0)) throw ValidationError("box_length must be positive");
}

}  // namespace

double GridSpec::dq(int axis) const { return 2.0 * M_PI / box_length[axis]; }

double GridSpec::max_abs_q(int axis) const { return M_PI / dx(axis); }

double GridSpec::cell_volume() const {
  double v = 1.0;
  for (int a = 0; a < dim; ++a) v *= dx(a);
  return v;
}

double GridSpec::spectral_cell() const {
  double v = 1.0;
  for (int a = 0; a < dim; ++a) v *= dq(a) / (2.0 * M_PI);
  return v;
}

GridSpec make_grid(int dim, int points, double box_length) {
  std::array<int, 3> n{1, 1, 1};
  std::array<double, 3> len{0.0, 0.0, 0.0};
  for (int a = 0; a < dim && a < 3; ++a) {
    n[a] = points;
    len[a] = box_length;
  }
  return make_grid(dim, n, len);
}

GridSpec make_grid(int dim, const std::array<int, 3>& points,
                   const std::array<double, 3>& box_length) {
  if (dim < 1 || dim > 3) throw ValidationError("dim must be 1, 2, or 3");
  GridSpec g;
  g.dim = dim;
  g.points = {1, 1, 1};
  g.box_length = {0.0, 0.0, 0.0};
  for (int a = 0; a < dim; ++a) {
    check_axis(points[a], box_length[a]);
    g.points[a] = points[a];
    g.box_length[a] = box_length[a];
  }
  return g;
}

}  // namespace bhs
