#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace cqsim {

using cplx = std::complex<double>;

bool is_pow2(std::size_t n);

// In-place radix-2 transform.  Forward: X_k = sum_j x_j e^{-2 pi i jk/n};
// inverse applies the conjugate kernel and divides by n, so
// fft(fft(x, false), true) == x up to roundoff.  Twiddle factors are
// evaluated directly per index (no running products), which keeps results
// bitwise reproducible and the forward/inverse kernels exactly conjugate.
// Throws InternalError unless n is a power of two.
void fft(std::vector<cplx>& a, bool inverse);

}  // namespace cqsim
