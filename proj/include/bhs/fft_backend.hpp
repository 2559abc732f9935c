#ifndef BHS_FFT_BACKEND_HPP
#define BHS_FFT_BACKEND_HPP

#include <complex>

#include "bhs/grid.hpp"

namespace bhs {

/// Unnormalized in-place DFTs on row-major interleaved complex data.
///
/// Plans are cached per (shape, direction) and created with FFTW_ESTIMATE
/// only, so transform results are reproducible run to run on one platform.
/// Thread safety: calls are serialized internally.
namespace fft {

/// data[k] <- sum_j data[j] exp(-2*pi*i j.k / N)
void forward(const GridSpec& g, std::complex<double>* data);

/// data[j] <- sum_k data[k] exp(+2*pi*i j.k / N)   (no 1/N factor)
void backward(const GridSpec& g, std::complex<double>* data);

}  // namespace fft
}  // namespace bhs

#endif
