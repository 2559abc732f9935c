#include "bhs/fft_backend.hpp"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <mutex>

namespace bhs {
namespace fft {

namespace {

struct PlanKey {
  std::array<int, 3> n;
  int dim;
  int sign;
  bool operator<(const PlanKey& o) const {
    if (dim != o.dim) return dim < o.dim;
    if (sign != o.sign) return sign < o.sign;
    return n < o.n;
  }
};

// One cached plan with its own aligned buffer; data is copied in and out so
// caller storage never constrains FFTW's SIMD alignment choices.
struct PlanSlot {
  fftw_plan plan = nullptr;
  fftw_complex* buf = nullptr;
  std::size_t count = 0;

  ~PlanSlot() {
    if (plan) fftw_destroy_plan(plan);
    if (buf) fftw_free(buf);
  }
};

std::mutex g_mutex;
std::map<PlanKey, PlanSlot>& cache() {
  static std::map<PlanKey, PlanSlot> c;
  return c;
}

void execute(const GridSpec& g, std::complex<double>* data, int sign) {
  std::lock_guard<std::mutex> lock(g_mutex);
  PlanKey key{g.points, g.dim, sign};
  PlanSlot& slot = cache()[key];
  if (!slot.plan) {
    slot.count = g.size();
    slot.buf = fftw_alloc_complex(slot.count);
    int n[3] = {g.points[0], g.points[1], g.points[2]};
    slot.plan = fftw_plan_dft(g.dim, n, slot.buf, slot.buf, sign, FFTW_ESTIMATE);
  }
  std::memcpy(static_cast<void*>(slot.buf), static_cast<const void*>(data),
              slot.count * sizeof(fftw_complex));
  fftw_execute(slot.plan);
  std::memcpy(static_cast<void*>(data), static_cast<const void*>(slot.buf),
              slot.count * sizeof(fftw_complex));
}

}  // namespace

void forward(const GridSpec& g, std::complex<double>* data) { execute(g, data, FFTW_FORWARD); }

void backward(const GridSpec& g, std::complex<double>* data) { execute(g, data, FFTW_BACKWARD); }

}  // namespace fft
}  // namespace bhs
