#include "bhs/operator_norm.hpp"

#include <cmath>

#include "bhs/errors.hpp"
#include "bhs/rng.hpp"
#include "bhs/spectral.hpp"

namespace bhs {

OpNormResult op_norm_estimate(const GridSpec& grid, const LinearMap& map, int max_iters,
                              double rel_tol, std::uint64_t seed) {
  if (!map.forward || !map.adjoint) throw ValidationError("op_norm_estimate: missing callbacks");
  if (max_iters < 1) throw ValidationError("op_norm_estimate: max_iters must be >= 1");

  Rng rng(seed);
  ComplexField v(grid, FieldRep::Position);
  for (std::size_t i = 0; i < grid.size(); ++i) v[i] = rng.complex_gaussian();
  double nv = l2_norm(v);
  if (nv == 0.0) return {0.0, 0, true};
  for (std::size_t i = 0; i < grid.size(); ++i) v[i] /= nv;

  OpNormResult res;
  double prev = -1.0;
  for (int it = 1; it <= max_iters; ++it) {
    ComplexField w = map.forward(v);
    const double sigma = l2_norm(w);
    res.value = sigma;
    res.iterations = it;
    if (!std::isfinite(sigma)) throw AbortError("op_norm_estimate: non-finite iterate");
    if (sigma == 0.0) {
      // The start vector happens to be annihilated; report the zero estimate.
      res.converged = true;
      return res;
    }
    if (prev >= 0.0 && std::abs(sigma - prev) <= rel_tol * sigma) {
      res.converged = true;
      return res;
    }
    prev = sigma;
    ComplexField u = map.adjoint(w);
    const double nu = l2_norm(u);
    if (nu == 0.0) {
      res.converged = true;
      return res;
    }
    for (size_t i = 0; i < u.samples().size(); ++i) u[i] /= nu;
    v = std::move(u);
  }
  return res;
}

}  // namespace bhs
