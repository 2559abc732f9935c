#ifndef BHS_RNG_HPP
#define BHS_RNG_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace bhs {

/// Deterministic random source for power-iteration starts and test banks.
/// Doubles are produced from raw mt19937_64 words (not from the library
/// distributions, whose streams differ between standard library builds).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  /// Uniform in [0,1) with 53-bit resolution.
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  /// Standard normal via Box-Muller.
  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    double u2 = uniform();
    while (u1 <= 0.0) u1 = uniform();  // avoid log(0)
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * M_PI * u2);
    have_spare_ = true;
    return r * std::cos(2.0 * M_PI * u2);
  }

  std::complex<double> complex_gaussian() {
    const double re = gaussian();
    return {re, gaussian()};
  }

 private:
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace bhs

#endif
