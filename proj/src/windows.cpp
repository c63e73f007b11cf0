#include "cifg/windows.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace cifg {

namespace {

// Meyer auxiliary polynomial: nu(0)=0, nu(1)=1, C^3 joins at both ends.
double meyer_nu(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  return t * t * t * t * (35.0 + t * (-84.0 + t * (70.0 - 20.0 * t)));
}

}  // namespace

double meyer_lowpass(double t) {
  if (t <= 1.0) return 1.0;
  if (t >= 2.0) return 0.0;
  return std::cos(0.5 * std::numbers::pi * meyer_nu(t - 1.0));
}

double ScaleWindows::scaling(int r, int c) const { return std::sqrt(scaling_sq.at(r, c)); }

double ScaleWindows::detail(int j, int r, int c) const {
  return std::sqrt(detail_sq[static_cast<size_t>(j)].at(r, c));
}

ScaleWindows build_scale_windows(int N, int J) {
  if (J < 0) throw std::invalid_argument("build_scale_windows: J must be nonnegative");
  if (N < 2 || (N & (N - 1)) != 0)
    throw std::invalid_argument("build_scale_windows: N must be a power of two");
  const int min_n = 1 << (J + 2);
  if (N < min_n)
    throw std::invalid_argument("build_scale_windows: N too small for J, need N >= " +
                                std::to_string(min_n));

  // Cutoffs a_j = N / 2^(J+2-j); the top low-pass s_{J+1} is identically 1
  // on the grid (a_{J+1} = N/2 bounds every |k_i|), so the squared windows
  // telescope to an exact partition of unity.
  ScaleWindows w;
  w.N = N;
  w.J = J;
  w.scaling_sq = RealGrid(N, N);
  w.detail_sq.assign(static_cast<size_t>(J + 1), RealGrid(N, N));

  for (int r = 0; r < N; ++r) {
    for (int c = 0; c < N; ++c) {
      const double radius =
          std::max(std::abs(centered_freq(r, N)), std::abs(centered_freq(c, N)));
      double prev_sq = 0.0;
      for (int j = 0; j <= J + 1; ++j) {
        const double cutoff = static_cast<double>(N) / (1 << (J + 2 - j));
        const double s = meyer_lowpass(radius / cutoff);
        const double s_sq = s * s;
        if (j == 0)
          w.scaling_sq.at(r, c) = s_sq;
        else
          w.detail_sq[static_cast<size_t>(j - 1)].at(r, c) = s_sq - prev_sq;
        prev_sq = s_sq;
      }
    }
  }
  return w;
}

}  // namespace cifg
