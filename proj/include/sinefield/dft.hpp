#pragma once

#include <complex>
#include <span>
#include <vector>

#include "sinefield/types.hpp"

namespace sf {

// Direct O(n^2) forward transform; reference path and fallback for sizes
// that are not a power of two.
std::vector<std::complex<double>> dft_direct(std::span<const double> signal);

// In-place radix-2 Cooley-Tukey; buf.size() must be a power of two >= 1.
void fft_radix2(std::vector<std::complex<double>>& buf);

// Magnitudes |X_k| of the forward transform. Uses radix-2 when n is a power
// of two and the direct transform otherwise; both routes agree within
// relative 1e-9.
std::vector<double> dft1d(std::span<const double> signal);

// 2D magnitude spectrum via row then column transforms.
Matrix dft2d_magnitude(const Matrix& img);

}  // namespace sf
