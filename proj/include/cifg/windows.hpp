#pragma once

#include "cifg/grid.hpp"

#include <vector>

namespace cifg {

// Meyer-type frequency windows on the centered DFT grid. The scaling
// window scaling_sq and the per-scale windows detail_sq[j], j = 0..J,
// are stored SQUARED so the partition of unity
//     scaling_sq + sum_j detail_sq[j] = 1
// holds at every grid frequency up to rounding. Window j lives on the
// dyadic annulus  N/2^(J+2-j) <= max(|k1|,|k2|) <= N/2^(J-j)  (the top
// window extends to the grid corners).
struct ScaleWindows {
  int N = 0;
  int J = 0;
  std::vector<RealGrid> detail_sq;  // J+1 grids, scale 0 (coarse) .. J (fine)
  RealGrid scaling_sq;

  double scaling(int r, int c) const;  // sqrt of the stored squared window
  double detail(int j, int r, int c) const;
};

// Requires N a power of two with N >= 2^(J+2); rejects smaller grids.
ScaleWindows build_scale_windows(int N, int J);

// Meyer low-pass profile: 1 on [0,1], cos(pi/2 * nu(t-1)) on [1,2], 0 beyond.
double meyer_lowpass(double t);

}  // namespace cifg
