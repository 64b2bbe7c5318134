#include "fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

namespace modspace::detail {
namespace {

struct Scratch {
  fftw_complex* buf = nullptr;
  std::size_t capacity = 0;
  ~Scratch() {
    if (buf) fftw_free(buf);
  }
  fftw_complex* get(std::size_t count) {
    if (count > capacity) {
      if (buf) fftw_free(buf);
      buf = fftw_alloc_complex(count);
      if (!buf) throw std::bad_alloc();
      capacity = count;
    }
    return buf;
  }
};

thread_local Scratch scratch;

std::mutex planner_mutex;
std::map<std::tuple<int, std::size_t, int>, fftw_plan> plans;

// The planner is not reentrant, so plan creation is serialized. Plans are
// made with FFTW_ESTIMATE, which picks the same algorithm on every run.
fftw_plan plan_for(int dim, std::size_t n, int sign) {
  std::lock_guard<std::mutex> lock(planner_mutex);
  auto key = std::make_tuple(dim, n, sign);
  auto it = plans.find(key);
  if (it != plans.end()) return it->second;
  int dims[3] = {static_cast<int>(n), static_cast<int>(n), static_cast<int>(n)};
  std::size_t total = 1;
  for (int d = 0; d < dim; ++d) total *= n;
  fftw_complex* tmp = fftw_alloc_complex(total);
  fftw_plan p = fftw_plan_dft(dim, dims, tmp, tmp, sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD,
                              FFTW_ESTIMATE);
  fftw_free(tmp);
  if (!p) throw std::runtime_error("fft: plan creation failed");
  plans.emplace(key, p);
  return p;
}

}  // namespace

void dft(std::complex<double>* data, int dim, std::size_t n, int sign) {
  if (dim < 1 || dim > 3) throw std::invalid_argument("fft: dimension must be 1, 2 or 3");
  std::size_t total = 1;
  for (int d = 0; d < dim; ++d) total *= n;
  fftw_plan p = plan_for(dim, n, sign);
  fftw_complex* buf = scratch.get(total);
  std::memcpy(static_cast<void*>(buf), static_cast<const void*>(data), total * sizeof(fftw_complex));
  fftw_execute_dft(p, buf, buf);
  std::memcpy(static_cast<void*>(data), static_cast<const void*>(buf), total * sizeof(fftw_complex));
}

}  // namespace modspace::detail
