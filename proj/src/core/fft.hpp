#pragma once

#include <complex>
#include <vector>

namespace frachc {

using cvec = std::vector<std::complex<double>>;

// Unnormalized forward DFT, X_k = sum_m x_m e^{-2 pi i mk/n}.
void fft_forward(const cvec& in, cvec& out);

// Normalized inverse DFT (divides by n), so fft_inverse(fft_forward(x)) == x.
void fft_inverse(const cvec& in, cvec& out);

}  // namespace frachc
