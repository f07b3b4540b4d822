#pragma once

#include <complex>
#include <span>
#include <vector>

namespace amc::fft {

using cd = std::complex<double>;

/// Unnormalized forward DFT: X[k] = sum_n x[n] exp(-j 2 pi k n / N).
std::vector<cd> forward(std::span<const cd> x);

/// Inverse DFT including the 1/N factor.
std::vector<cd> inverse(std::span<const cd> X);

/// Forward DFT of a real series (full complex spectrum of length N).
std::vector<cd> forward_real(std::span<const double> x);

}  // namespace amc::fft
