#include "bhs/fitting.hpp"

#include <cmath>
#include <string>

#include "bhs/errors.hpp"

namespace bhs {

FitResult fit_exponent(const std::vector<double>& scales,
                       const std::vector<double>& values, double lo, double hi) {
  if (scales.size() != values.size())
    throw ValidationError("fit_exponent: scales and values differ in length");
  if (!(lo > 0.0) || !(hi >= lo))
    throw ValidationError("fit_exponent: window must satisfy 0 < lo <= hi");

  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < scales.size(); ++i) {
    const double s = scales[i], v = values[i];
    if (s < lo || s > hi) continue;
    if (!(s > 0.0)) continue;
    if (!(v > 0.0))
      throw ValidationError("fit_exponent: nonpositive value inside the fit window");
    lx.push_back(std::log(s));
    ly.push_back(std::log(v));
  }
  if (lx.size() < 5)
    throw ValidationError("fit_exponent: need at least five points in [" +
                          std::to_string(lo) + ", " + std::to_string(hi) + "], have " +
                          std::to_string(lx.size()));

  const double n = static_cast<double>(lx.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (!(sxx > 0.0))
    throw ValidationError("fit_exponent: all points share one scale; slope undetermined");

  FitResult r;
  r.exponent = sxy / sxx;
  r.intercept = my - r.exponent * mx;
  r.points_used = lx.size();
  double ss = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    const double e = ly[i] - (r.intercept + r.exponent * lx[i]);
    ss += e * e;
  }
  r.rms_residual = std::sqrt(ss / n);
  return r;
}

}  // namespace bhs
