#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>
#include <vector>

namespace fringe::fft {
namespace {

std::mutex plan_mutex;

// Plans live for the process; FFTW planning is not thread-safe, execution
// through fftw_execute_dft on caller buffers is.
fftw_plan plan_for(int rows, int cols, int sign) {
  static std::map<std::tuple<int, int, int>, fftw_plan>& plans =
      *new std::map<std::tuple<int, int, int>, fftw_plan>();
  std::lock_guard<std::mutex> lock(plan_mutex);
  const auto key = std::make_tuple(rows, cols, sign);
  auto it = plans.find(key);
  if (it != plans.end()) return it->second;
  std::vector<std::complex<double>> scratch(static_cast<std::size_t>(rows) * cols);
  fftw_complex* p = reinterpret_cast<fftw_complex*>(scratch.data());
  fftw_plan plan = fftw_plan_dft_2d(rows, cols, p, p, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
  if (!plan) throw std::runtime_error("fft: plan creation failed");
  plans.emplace(key, plan);
  return plan;
}

void execute(int rows, int cols, int sign, std::complex<double>* data) {
  fftw_plan plan = plan_for(rows, cols, sign);
  fftw_complex* p = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(plan, p, p);
}

}  // namespace

int next_fast_size(int n) {
  if (n < 1) return 1;
  for (int candidate = n;; ++candidate) {
    int m = candidate;
    for (int f : {2, 3, 5, 7}) {
      while (m % f == 0) m /= f;
    }
    if (m == 1) return candidate;
  }
}

void forward(int rows, int cols, std::complex<double>* data) {
  execute(rows, cols, FFTW_FORWARD, data);
}

void inverse(int rows, int cols, std::complex<double>* data) {
  execute(rows, cols, FFTW_BACKWARD, data);
}

}  // namespace fringe::fft
