#pragma once

#include "cifg/grid.hpp"
#include "cifg/shear.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace cifg {

// Deterministic 64-bit stream (splitmix64). Used instead of <random>
// engines so drawn masks are identical across standard libraries.
struct RandomStream {
  uint64_t state;

  explicit RandomStream(uint64_t seed) : state(seed) {}
  uint64_t next_u64();
  double next_unit();  // in [0, 1)
};

// Stable per-stream seed: mixes the user seed with the shear and cone
// labels through an FNV-1a/splitmix chain (no std::hash involvement).
uint64_t stream_seed(uint64_t seed, const ShearIndex& s, const std::string& cone_label);

struct FreqPoint {
  int n1 = 0;  // signed frequency, first axis
  int n2 = 0;

  bool operator==(const FreqPoint& o) const { return n1 == o.n1 && n2 == o.n2; }
  bool operator<(const FreqPoint& o) const {
    return n1 != o.n1 ? n1 < o.n1 : n2 < o.n2;
  }
};

enum class DensityKind { Continuum, Discrete, RadialBaseline };

// Shear-indexed probability density over the centered N x N grid.
// Unnormalized point masses:
//   continuum:        1 / (J^2 (1+|n1|) (1+|n2 - s*n1|))
//   discrete:         1 / ((1+|n1|)^e (1+|a*n2 - s*n1|)^e), default e = 5
//   radial baseline:  1 / (1 + |n|_2)^e, default e = 2
// The discrete anisotropy factor a defaults to 2^(J/2); the
// shear-aligned variant (a = 1) puts the ridge on the slope-s line the
// sheared filters and synthesis atoms occupy.
struct SamplingDensity {
  DensityKind kind = DensityKind::Discrete;
  int N = 0;
  int J = 0;
  double shear = 0.0;
  double exponent = 5.0;
  double aniso = 1.0;
  double norm_constant = 0.0;  // c_s; unnormalized masses sum to 1/c_s

  double unnormalized(const FreqPoint& n) const;
  double operator()(const FreqPoint& n) const;  // normalized mass
};

SamplingDensity density_continuum(int N, int J, double shear);
SamplingDensity density_discrete(int N, int J, double shear, double exponent = 5.0);
SamplingDensity density_discrete_aligned(int N, int J, double shear, double exponent = 5.0);
SamplingDensity density_radial(int N, double exponent = 2.0);

enum class DensityVariant { Paper, ShearAligned };

// Normalization constant over the centered N x N domain by direct
// summation; rejects empty domains and non-summable masses.
double normalize_constant(const std::function<double(const FreqPoint&)>& unnormalized, int N);

// Raw i.i.d. draws (duplicates kept); the Monte-Carlo density tests
// consume these.
std::vector<FreqPoint> raw_draws(const SamplingDensity& d, int count, RandomStream& stream);

struct MaskEntry {
  ShearIndex shear;
  std::string cone;              // "horizontal", "vertical", or "radial"
  std::vector<FreqPoint> points;  // sorted lexicographically, duplicate-free
};

struct SamplingMask {
  int N = 0;
  int J = 0;
  double rho = 0.0;
  uint64_t seed = 0;
  std::string draw_policy = "iid-dedup";
  std::string count_spec;  // echo of the requested ratio / per-shear m
  double density_exponent = 5.0;
  std::string density_variant = "paper";
  std::vector<MaskEntry> entries;

  std::vector<FreqPoint> union_points() const;  // sorted, deduplicated
  size_t union_size() const;
  // Row-major membership map (1 = kept frequency) in storage layout.
  std::vector<uint8_t> membership(int rows, int cols) const;
};

// Directional mask: for every shear in shear_set(J) and both cones,
// draws `per_shear` distinct points i.i.d. from the discrete density
// (duplicates rejected until the count is reached or the domain is
// exhausted). The per-(shear, cone) streams are independently seeded,
// so draws commute and a run is reproducible from (J, N, m, seed).
SamplingMask draw_mask(int J, int N, int per_shear, uint64_t seed, double exponent = 5.0,
                       DensityVariant variant = DensityVariant::Paper);

// Ratio-driven directional mask: every (shear, cone) stream draws the
// same number of points, one round at a time, until the union covers
// `target_union` distinct frequencies. Draw streams are nested, so a
// larger target extends the smaller mask.
SamplingMask draw_mask_to_union(int J, int N, size_t target_union, uint64_t seed,
                                double exponent = 5.0,
                                DensityVariant variant = DensityVariant::ShearAligned);

// Radially decaying baseline mask with floor(ratio * N^2) points.
SamplingMask baseline_radial_mask(int N, double ratio, uint64_t seed, double exponent = 2.0);

// Projection onto the mask frequencies: keeps U at kept frequencies,
// zeroes the rest. Idempotent.
ComplexGrid mask_apply(const ComplexGrid& U, const SamplingMask& mask);

// Theoretical per-shear sampling count m_{J,s} = round(2^((J-j0)/2) * 2^(3*J*rho))
// where j0 is the generation scale of s (0 for s=0, 2*level-1 otherwise).
int theoretical_per_shear_count(int J, const ShearIndex& s, double rho);

struct CardinalityReport {
  std::vector<int> J_values;
  std::vector<size_t> counts;
  std::vector<double> ratios;  // counts / (J * 2^(J/2*(1+6 rho)))
  double band = 0.0;           // max ratio / min ratio
  bool bounded = false;        // ratios nonincreasing within 20% fluctuation
};

// Checks the growth of |Delta_J| against J * 2^(J/2*(1+6 rho)).
CardinalityReport cardinality_scaling_check(const std::vector<int>& J_values,
                                            const std::vector<size_t>& counts, double rho);

// Mask JSON (schema in the README) and the Fig.-2-style PGM rendering.
std::string mask_to_json(const SamplingMask& mask);
SamplingMask mask_from_json(const std::string& text);
void save_mask(const SamplingMask& mask, const std::string& json_path,
               const std::string& pgm_path = "");
SamplingMask load_mask(const std::string& json_path);

}  // namespace cifg
