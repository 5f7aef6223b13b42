#pragma once

#include <complex>

// Thin wrapper over the system FFT library: unnormalized in-place 2D
// complex transforms with a process-lifetime plan cache. Plan creation is
// serialized internally; executing transforms is thread-safe.
namespace fringe::fft {

// Smallest size >= n whose prime factors are all in {2, 3, 5, 7}.
int next_fast_size(int n);

void forward(int rows, int cols, std::complex<double>* data);
void inverse(int rows, int cols, std::complex<double>* data);  // unnormalized

}  // namespace fringe::fft
