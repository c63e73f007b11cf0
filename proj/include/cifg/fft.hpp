#pragma once

#include "cifg/grid.hpp"

namespace cifg {

// Unnormalized forward DFT, F(u)(k) = sum_n u(n) exp(-2*pi*i*(n1*k1/rows + n2*k2/cols)).
// The spectrum is stored with DC at index (0,0); see centered_freq/storage_index
// for the signed-frequency view. Rejects non-finite input.
ComplexGrid dft2(const RealGrid& u);
ComplexGrid dft2(const ComplexGrid& u);

// Inverse of dft2, carrying the 1/(rows*cols) factor.
ComplexGrid idft2(const ComplexGrid& U);

// Circular convolution of equal-shape grids via the spectral product.
RealGrid circ_conv(const RealGrid& u, const RealGrid& h);
ComplexGrid circ_conv(const ComplexGrid& u, const ComplexGrid& h);

// 10*log10(peak^2 / MSE) in dB; +infinity when the grids coincide.
double psnr(const RealGrid& u, const RealGrid& v, double peak = 1.0);

namespace detail {
// In-place 1D transforms along each row (length = cols), unnormalized
// forward; the inverse carries 1/cols. Used by the digital shear.
void fft_rows_inplace(ComplexGrid& g, bool inverse);
}  // namespace detail

}  // namespace cifg
