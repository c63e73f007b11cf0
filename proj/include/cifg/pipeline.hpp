#pragma once

#include "cifg/filters.hpp"
#include "cifg/grid.hpp"
#include "cifg/l1.hpp"
#include "cifg/sampling.hpp"
#include "cifg/wavelet.hpp"

#include <optional>
#include <string>
#include <vector>

namespace cifg {

struct MeasurementSet {
  int N = 0;
  SamplingMask mask;
  ComplexGrid samples;  // P_Delta F(u), zero off the mask
};

MeasurementSet forward_measure(const RealGrid& u, const SamplingMask& mask);

struct ShearSolve {
  ShearIndex shear;
  std::string cone;
  SolverReport report;
};

struct ReconstructionReport {
  std::string scheme;
  int N = 0;
  int J = 0;
  std::vector<ShearSolve> per_shear;
  std::optional<double> psnr_db;  // only when ground truth is supplied
  double seconds = 0.0;
  double imag_residue_rel = 0.0;  // discarded imaginary part, relative
  int converged_shears = 0;
  bool degraded = false;   // some shears excluded from the combination
  bool trivial = false;    // empty measurements, zero solution
  std::string config_echo; // JSON fragment, embedded into the report

  std::string to_json() const;
};

struct PipelineOptions {
  // The library solver defaults target small oracle-checked instances;
  // grid-scale reconstructions stop on a looser iterate tolerance.
  SolverOptions solver{.max_iterations = 1500, .relative_tol = 1e-3};
  int threads = 1;
  // Isotropic depth of the wavelet baseline sparsifier.
  int wavelet_depth = 4;
  // Row depth of the directional sparsifier; 0 keeps the default J.
  // The column depth follows at half, parabolic ratio preserved.
  int directional_depth = 0;
};

// Per-shear basis pursuit against the filtered measurements
//   F(G_s) o y = P_Delta F(S_s W* c_s)
// followed by dual-filter recombination u = sum_s G~_s * S_s(W* c_s).
// Non-converged shears are flagged and left out of the sum; the final
// grid's imaginary residue is logged and discarded.
std::pair<RealGrid, ReconstructionReport> reconstruct_directional(
    const MeasurementSet& meas, const DirectionalFilterSet& filters,
    const PipelineOptions& opts = {});

// Wavelet-sparsity baseline: a single basis pursuit min ||W g||_1
// subject to agreement with the masked spectrum, with the isotropic
// orthonormal wavelet transform as the sparsifier.
std::pair<RealGrid, ReconstructionReport> reconstruct_wavelet(const MeasurementSet& meas,
                                                              const PipelineOptions& opts = {});

// Scheme ids: shearNN (directional, NN = filter count, J from NN),
// wave01 (radial variable-density mask), wave02 (directional mask).
struct SchemeConfig {
  std::string id;
  int J = 4;  // finest scale for directional filters / wave02's mask
};

int scheme_filter_count(int J);
int scheme_J_from_id(const std::string& id);  // throws listing valid ids
bool scheme_is_directional(const std::string& id);

SamplingMask scheme_mask(const SchemeConfig& scheme, int N, double ratio, uint64_t seed);

struct CompareRow {
  std::string scheme;
  double ratio = 0.0;
  uint64_t seed = 0;
  double psnr_db = 0.0;
  double seconds = 0.0;
  int converged_shears = 0;
};

struct CompareResult {
  std::vector<CompareRow> rows;
  std::vector<ReconstructionReport> reports;

  std::string to_csv() const;
  std::string to_json() const;
};

// PSNR/runtime matrix over (scheme, ratio, seed); deterministic given
// the seed list. `record_timing=false` zeroes the seconds column so two
// runs of the same config serialize identically.
CompareResult compare_schemes(const RealGrid& ground_truth,
                              const std::vector<SchemeConfig>& schemes,
                              const std::vector<double>& ratios,
                              const std::vector<uint64_t>& seeds,
                              const PipelineOptions& opts = {}, bool record_timing = true);

}  // namespace cifg
