#pragma once

#include "cifg/grid.hpp"

#include <array>

namespace cifg {

// Orthonormal conjugate-quadrature pair. The high-pass taps follow the
// alternating-flip convention g[k] = (-1)^k h[taps-1-k].
struct WaveletPair {
  static constexpr int taps = 8;
  std::array<double, taps> lowpass;
  std::array<double, taps> highpass;
};

// Default 8-tap orthonormal pair (Daubechies extremal-phase family).
const WaveletPair& default_wavelet();

// Anisotropic wavelet coefficients in the usual in-place layout: after
// depth d along an axis, slot i < len/2^d holds the coarse band.
struct WaveletCoeffs {
  RealGrid grid;
  int depth_rows = 0;  // decomposition depth along axis 1 (rows)
  int depth_cols = 0;  // decomposition depth along axis 2 (columns)
};

struct WaveletCoeffsC {
  ComplexGrid grid;
  int depth_rows = 0;
  int depth_cols = 0;
};

// Fully separable orthonormal 2D transform with independent per-axis
// depths; periodic boundary handling keeps it exactly orthonormal, so
// awt_inverse(awt_forward(u)) = u and norms are preserved to rounding.
// The anisotropic default runs depth J along axis 1 and ceil(J/2) along
// axis 2, mirroring parabolic scaling. Depths beyond log2 of the axis
// length are rejected.
WaveletCoeffs awt_forward(const RealGrid& u, int J);
RealGrid awt_inverse(const WaveletCoeffs& c);

// Explicit-depth variants (the isotropic baseline uses equal depths).
WaveletCoeffs awt_forward(const RealGrid& u, int depth_rows, int depth_cols);
WaveletCoeffsC awt_forward(const ComplexGrid& u, int depth_rows, int depth_cols);
ComplexGrid awt_inverse(const WaveletCoeffsC& c);

int awt_depth_rows(int J);
int awt_depth_cols(int J);

}  // namespace cifg
