#include "core/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>

namespace frachc {

namespace {

// FFTW's planner is not thread-safe but fftw_execute_dft on an existing plan is.
// Plans are created once per (size, direction) and kept for the process lifetime.
class PlanCache {
public:
  fftw_plan get(int n, int sign) {
    std::lock_guard<std::mutex> lock(mutex_);
    auto key = std::make_pair(n, sign);
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;
    // Out-of-place template, so executions must also pass distinct arrays.
    auto* buf = fftw_alloc_complex(static_cast<std::size_t>(n));
    auto* out = fftw_alloc_complex(static_cast<std::size_t>(n));
    fftw_plan p = fftw_plan_dft_1d(n, buf, out, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(buf);
    fftw_free(out);
    if (!p) throw std::runtime_error("fft: plan creation failed");
    plans_.emplace(key, p);
    return p;
  }

  ~PlanCache() {
    for (auto& [key, p] : plans_) fftw_destroy_plan(p);
  }

private:
  std::mutex mutex_;
  std::map<std::pair<int, int>, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache c;
  return c;
}

void execute(const cvec& in, cvec& out, int sign) {
  const int n = static_cast<int>(in.size());
  if (n == 0) throw std::invalid_argument("fft: empty input");
  out.resize(in.size());
  fftw_plan p = cache().get(n, sign);
  if (in.data() == out.data()) {
    cvec tmp(in);
    fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(tmp.data()),
                     reinterpret_cast<fftw_complex*>(out.data()));
    return;
  }
  // FFTW does not modify the input of an out-of-place complex DFT.
  fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(in.data())),
                   reinterpret_cast<fftw_complex*>(out.data()));
}

}  // namespace

void fft_forward(const cvec& in, cvec& out) { execute(in, out, FFTW_FORWARD); }

void fft_inverse(const cvec& in, cvec& out) {
  execute(in, out, FFTW_BACKWARD);
  const double s = 1.0 / static_cast<double>(out.size());
  for (auto& v : out) v *= s;
}

}  // namespace frachc
