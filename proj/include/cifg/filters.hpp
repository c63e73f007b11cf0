#pragma once

#include "cifg/grid.hpp"
#include "cifg/shear.hpp"
#include "cifg/windows.hpp"

#include <string>
#include <vector>

namespace cifg {

enum class Cone { Horizontal, Vertical };

const char* cone_name(Cone c);
Cone cone_from_name(const std::string& name);

struct DirectionalFilter {
  ShearIndex shear;
  Cone cone = Cone::Horizontal;
  ComplexGrid spectrum;  // F(G_s)
  ComplexGrid dual;      // F(G~_s) = conj(F(G_s)) / sum_s' |F(G_s')|^2
};

// All directional filters for grid size N and finest scale J: one filter
// per shear in shear_set(J) for the horizontal cone, plus vertical-cone
// counterparts obtained by transposing the spectra. The s=0 filters of
// the two cones are kept as distinct entries; the dual formula absorbs
// the overlap. Entries are sorted by (cone, shear) so sums over the set
// are reproducible.
struct DirectionalFilterSet {
  int N = 0;
  int J = 0;
  std::vector<DirectionalFilter> filters;
  double c_low = 0.0;  // min over frequencies of sum_s |F(G_s)|^2

  const DirectionalFilter& find(const ShearIndex& s, Cone cone) const;
};

// Builds the unsheared horizontal-cone filter spectrum
//   F(G_0) = |phi|^2 + sum_j |psi_j|^2 * cone_weight
// from the scale windows and an angular weight that is 1 on slopes
// |k2/k1| <= 1 and rolls off to 0 by slope 2.
ComplexGrid base_filter_spectrum(const ScaleWindows& w);

// Sheared filters F(G_s) = digital_shear(F(G_0), s) plus transposed
// vertical copies, with duals from the closed formula. Fails if the
// energy sum degenerates (c_low <= 1e-8) anywhere on the grid.
DirectionalFilterSet build_directional_filters(int N, int J);

// Recomputes the duals of `filters` from the stored spectra alone;
// build_directional_filters routes through this, so re-derivation is
// reproducible bit for bit.
std::vector<ComplexGrid> derive_duals(const std::vector<DirectionalFilter>& filters,
                                      double* c_low_out = nullptr);

// Filter-bank synthesis check helper: sum_s G~_s * G_s * u.
ComplexGrid filter_bank_roundtrip(const DirectionalFilterSet& fs, const ComplexGrid& u);

// Directory serialization: manifest.json {N, J, shears, c_low} next to
// one CIFG spectrum pair per filter.
void save_filter_set(const DirectionalFilterSet& fs, const std::string& dir);
DirectionalFilterSet load_filter_set(const std::string& dir);

}  // namespace cifg
