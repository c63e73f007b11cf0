#pragma once

#include "cifg/grid.hpp"

#include <string>

namespace cifg {

enum class PhantomKind { Disk, Ellipse, TwoRegionSmooth };

// Piecewise-smooth test image u(x) = f0(x) + f1(x) * indicator(B) on
// [0,1]^2, sampled at pixel cell centers. The boundary of B is a circle
// or axis-aligned ellipse (non-vanishing curvature); f0 is the affine
// background b0 + b1*x1 + b2*x2 and f1 is the interior jump, constant
// for disk/ellipse and jump * (1 + (x1-c1) + (x2-c2)) / 3 for the
// two-region-smooth kind.
struct PhantomSpec {
  PhantomKind kind = PhantomKind::Disk;
  int N = 256;
  double center_x1 = 0.5;
  double center_x2 = 0.5;
  double radius_x1 = 0.25;
  double radius_x2 = 0.25;  // disk ignores this and uses radius_x1
  double background[3] = {0.0, 0.0, 0.0};  // b0, b1, b2
  double jump = 1.0;

  static PhantomSpec from_json(const std::string& text);
  std::string to_json() const;
};

// Rejects regions escaping [0,1]^2 and specs whose intensities leave
// [0,1]. No anti-aliasing: boundary pixels take the indicator value at
// the exact cell center.
RealGrid render(const PhantomSpec& spec);

// The disk phantom the comparison harness defaults to.
PhantomSpec default_disk_phantom(int N);

}  // namespace cifg
