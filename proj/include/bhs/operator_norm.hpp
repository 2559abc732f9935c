#ifndef BHS_OPERATOR_NORM_HPP
#define BHS_OPERATOR_NORM_HPP

#include <cstdint>
#include <functional>

#include "bhs/field.hpp"

namespace bhs {

/// A bounded linear map given by matching forward/adjoint actions.
struct LinearMap {
  std::function<ComplexField(const ComplexField&)> forward;
  std::function<ComplexField(const ComplexField&)> adjoint;
};

struct OpNormResult {
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Largest singular value of the map, by power iteration on A*A starting
/// from a fixed-seed random field. Stops when successive estimates agree to
/// rel_tol or after max_iters sweeps.
OpNormResult op_norm_estimate(const GridSpec& grid, const LinearMap& map, int max_iters = 200,
                              double rel_tol = 1e-9, std::uint64_t seed = 0x5EED);

}  // namespace bhs

#endif
