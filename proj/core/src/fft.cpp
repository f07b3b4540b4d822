#include "amc/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <utility>

namespace amc::fft {
namespace {

struct BufferDeleter {
  void operator()(fftw_complex* p) const noexcept { fftw_free(p); }
};
using Buffer = std::unique_ptr<fftw_complex[], BufferDeleter>;

Buffer allocate(std::size_t n) { return Buffer(fftw_alloc_complex(n)); }

// FFTW planning is not thread-safe; execution through fftw_execute_dft with
// fresh (equally aligned) buffers is.
class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(std::size_t n, int sign) {
    std::lock_guard lock(mutex_);
    auto key = std::make_pair(n, sign);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    Buffer in = allocate(n);
    Buffer out = allocate(n);
    fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(n), in.get(), out.get(), sign,
                                      FFTW_ESTIMATE);
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<std::pair<std::size_t, int>, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

std::vector<cd> transform(std::span<const cd> x, int sign) {
  const std::size_t n = x.size();
  if (n == 0) return {};
  fftw_plan plan = cache().get(n, sign);
  thread_local std::size_t capacity = 0;
  thread_local Buffer in, out;
  if (capacity < n) {
    in = allocate(n);
    out = allocate(n);
    capacity = n;
  }
  std::copy(x.begin(), x.end(), reinterpret_cast<cd*>(in.get()));
  fftw_execute_dft(plan, in.get(), out.get());
  const cd* o = reinterpret_cast<const cd*>(out.get());
  return std::vector<cd>(o, o + n);
}

}  // namespace

std::vector<cd> forward(std::span<const cd> x) { return transform(x, FFTW_FORWARD); }

std::vector<cd> inverse(std::span<const cd> X) {
  auto x = transform(X, FFTW_BACKWARD);
  const double scale = 1.0 / static_cast<double>(X.size());
  for (auto& v : x) v *= scale;
  return x;
}

std::vector<cd> forward_real(std::span<const double> x) {
  std::vector<cd> c(x.begin(), x.end());
  return forward(c);
}

}  // namespace amc::fft
