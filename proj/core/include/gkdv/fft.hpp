#pragma once

#include <complex>
#include <span>

namespace gkdv::fft {

using cdouble = std::complex<double>;

// Unnormalised complex DFT, FFTW sign semantics: sign = -1 computes
// sum_j in[j] e^{-2 pi i j k / n}, sign = +1 the conjugate sum.
// Plans are cached per (size, sign) and built with FFTW_ESTIMATE so that
// repeated runs of the same binary produce bit-identical results.
// Thread-safe: planning is serialised, execution is concurrent.
void dft(std::span<const cdouble> in, std::span<cdouble> out, int sign);

// Smallest size >= n whose prime factors are all in {2, 3, 5}.
int next_fast_size(int n);

}  // namespace gkdv::fft
