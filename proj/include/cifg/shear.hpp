#pragma once

#include "cifg/grid.hpp"

#include <vector>

namespace cifg {

// Dyadic shear parameter s = q / 2^level with |s| <= 1. The numerator is
// odd (so the level is minimal) except for the zero shear (q=0, level=0).
struct ShearIndex {
  int q = 0;
  int level = 0;

  ShearIndex() = default;
  ShearIndex(int q_, int level_);

  double value() const { return static_cast<double>(q) / static_cast<double>(1 << level); }

  bool operator==(const ShearIndex& o) const { return q == o.q && level == o.level; }
  bool operator<(const ShearIndex& o) const { return value() < o.value(); }
};

// Shear parameters used by the directional filter bank at finest scale J
// (J positive and even): zero plus the odd dyadic fractions q/2^l for
// l = 1..J/2, |q| < 2^l, sorted ascending.
//   J=2 -> {-1/2, 0, 1/2}
//   J=4 -> {-3/4, -1/2, -1/4, 0, 1/4, 1/2, 3/4}
std::vector<ShearIndex> shear_set(int J);

// Geometric shear on a periodic grid: row r (signed coordinate k1) is
// circularly shifted along the columns by s*k1. Fractional shifts use
// linear-phase ramps in the row spectra, so the operator is unitary,
// exactly inverted by `inverse=true`, and reduces to index shifts when
// every s*k1 is an integer.
ComplexGrid digital_shear(const ComplexGrid& u, const ShearIndex& s, bool inverse = false);
RealGrid digital_shear(const RealGrid& u, const ShearIndex& s, bool inverse = false);

}  // namespace cifg
