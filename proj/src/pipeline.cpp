#include "cifg/pipeline.hpp"

#include "cifg/fft.hpp"

#include <nlohmann/json.hpp>

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <thread>

namespace cifg {

namespace {

using clock_type = std::chrono::steady_clock;

double elapsed_seconds(clock_type::time_point start) {
  return std::chrono::duration<double>(clock_type::now() - start).count();
}

std::vector<size_t> mask_flat_indices(const SamplingMask& mask) {
  std::vector<size_t> idx;
  for (const FreqPoint& p : mask.union_points())
    idx.push_back(static_cast<size_t>(storage_index(p.n1, mask.N)) * mask.N +
                  storage_index(p.n2, mask.N));
  return idx;
}

cvec gather(const ComplexGrid& g, const std::vector<size_t>& idx) {
  cvec out(idx.size());
  for (size_t i = 0; i < idx.size(); ++i) out[i] = g.data[idx[i]];
  return out;
}

ComplexGrid scatter(const cvec& v, const std::vector<size_t>& idx, int N) {
  ComplexGrid g(N, N);
  for (size_t i = 0; i < idx.size(); ++i) g.data[idx[i]] = v[i];
  return g;
}

ComplexGrid grid_from_vec(const cvec& v, int N) {
  ComplexGrid g(N, N);
  g.data = v;
  return g;
}

// Spectrum of the sheared synthesis F(S_s W* c), vertical cone via the
// coordinate swap.
ComplexGrid synthesis_spectrum(const cvec& coeffs, int N, int depth_rows, int depth_cols,
                               const ShearIndex& shear, bool vertical) {
  ComplexGrid c = grid_from_vec(coeffs, N);
  ComplexGrid img = awt_inverse({std::move(c), depth_rows, depth_cols});
  ComplexGrid spec = digital_shear(dft2(img), shear);
  return vertical ? transpose(spec) : spec;
}

LinearMap shear_system_map(int N, int depth_rows, int depth_cols, const ShearIndex& shear,
                           bool vertical, std::vector<size_t> flat_indices) {
  auto idx = std::make_shared<const std::vector<size_t>>(std::move(flat_indices));
  LinearMap op;
  op.input_dim = N * N;
  op.output_dim = static_cast<int>(idx->size());
  op.gram_scale = static_cast<double>(N) * N;
  op.forward = [=](const cvec& x) {
    return gather(synthesis_spectrum(x, N, depth_rows, depth_cols, shear, vertical), *idx);
  };
  op.adjoint = [=](const cvec& y) {
    ComplexGrid spec = scatter(y, *idx, N);
    if (vertical) spec = transpose(spec);
    spec = digital_shear(spec, shear, /*inverse=*/true);
    ComplexGrid img = idft2(spec);
    const double n2 = static_cast<double>(N) * N;
    for (cplx& z : img.data) z *= n2;
    WaveletCoeffsC c = awt_forward(img, depth_rows, depth_cols);
    return std::move(c.grid.data);
  };
  return op;
}

void run_tasks(int count, int threads, const std::function<void(int)>& task) {
  if (threads <= 1 || count <= 1) {
    for (int i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<int> next{0};
  const int workers = std::min(threads, count);
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(workers));
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) task(i);
    });
  for (auto& t : pool) t.join();
}

std::string json_double(double v) {
  if (std::isinf(v)) return v > 0 ? "\"inf\"" : "\"-inf\"";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

MeasurementSet forward_measure(const RealGrid& u, const SamplingMask& mask) {
  if (u.rows != u.cols) throw std::invalid_argument("forward_measure: image must be square");
  if (u.rows != mask.N) throw std::invalid_argument("forward_measure: image/mask size mismatch");
  MeasurementSet m;
  m.N = mask.N;
  m.mask = mask;
  m.samples = mask_apply(dft2(u), mask);
  return m;
}

std::string ReconstructionReport::to_json() const {
  nlohmann::json j;
  j["scheme"] = scheme;
  j["N"] = N;
  j["J"] = J;
  j["seconds"] = seconds;
  j["imag_residue_rel"] = imag_residue_rel;
  j["converged_shears"] = converged_shears;
  j["degraded"] = degraded;
  j["trivial"] = trivial;
  j["per_shear"] = nlohmann::json::array();
  for (const auto& s : per_shear)
    j["per_shear"].push_back({{"q", s.shear.q},
                              {"level", s.shear.level},
                              {"cone", s.cone},
                              {"iterations", s.report.iterations},
                              {"residual", s.report.residual},
                              {"objective", s.report.objective},
                              {"converged", s.report.converged}});
  if (!config_echo.empty()) j["config"] = nlohmann::json::parse(config_echo);
  if (psnr_db) {
    // nlohmann serializes infinities as null; keep the "inf" sentinel
    if (std::isinf(*psnr_db))
      j["psnr_db"] = *psnr_db > 0 ? "inf" : "-inf";
    else
      j["psnr_db"] = *psnr_db;
  }
  return j.dump(2) + "\n";
}

std::pair<RealGrid, ReconstructionReport> reconstruct_directional(
    const MeasurementSet& meas, const DirectionalFilterSet& filters,
    const PipelineOptions& opts) {
  if (filters.N != meas.N)
    throw std::invalid_argument("reconstruct_directional: filter set size mismatch");
  const auto start = clock_type::now();
  const int N = meas.N;
  const int J = filters.J;
  const int depth = opts.directional_depth > 0 ? opts.directional_depth : J;
  const int d_rows = awt_depth_rows(depth), d_cols = awt_depth_cols(depth);
  const std::vector<size_t> idx = mask_flat_indices(meas.mask);

  ReconstructionReport rep;
  {
    char tag[16];
    std::snprintf(tag, sizeof(tag), "shear%02d", static_cast<int>(filters.filters.size()));
    rep.scheme = tag;
  }
  rep.N = N;
  rep.J = J;
  rep.per_shear.resize(filters.filters.size());

  RealGrid out(N, N);
  if (idx.empty()) {
    // no measurements: zero is the minimizer of every subproblem
    for (size_t i = 0; i < filters.filters.size(); ++i) {
      rep.per_shear[i] = {filters.filters[i].shear, cone_name(filters.filters[i].cone), {}};
      rep.per_shear[i].report.converged = true;
    }
    rep.trivial = true;
    rep.converged_shears = static_cast<int>(filters.filters.size());
    rep.seconds = elapsed_seconds(start);
    return {std::move(out), rep};
  }

  std::vector<cvec> solutions(filters.filters.size());
  run_tasks(static_cast<int>(filters.filters.size()), opts.threads, [&](int i) {
    const DirectionalFilter& f = filters.filters[static_cast<size_t>(i)];
    const bool vertical = f.cone == Cone::Vertical;
    LinearMap A = shear_system_map(N, d_rows, d_cols, f.shear, vertical, idx);
    cvec rhs(idx.size());
    for (size_t k = 0; k < idx.size(); ++k)
      rhs[k] = f.spectrum.data[idx[k]] * meas.samples.data[idx[k]];
    auto [coeffs, report] = basis_pursuit(A, rhs, opts.solver);
    solutions[static_cast<size_t>(i)] = std::move(coeffs);
    rep.per_shear[static_cast<size_t>(i)] = {f.shear, cone_name(f.cone), report};
  });

  // fixed-order recombination through the dual filters
  ComplexGrid acc(N, N);
  for (size_t i = 0; i < filters.filters.size(); ++i) {
    if (!rep.per_shear[i].report.converged) {
      rep.degraded = true;
      continue;
    }
    ++rep.converged_shears;
    const DirectionalFilter& f = filters.filters[i];
    const ComplexGrid spec = synthesis_spectrum(solutions[i], N, d_rows, d_cols, f.shear,
                                                f.cone == Cone::Vertical);
    for (size_t k = 0; k < acc.data.size(); ++k) acc.data[k] += f.dual.data[k] * spec.data[k];
  }
  ComplexGrid img = idft2(acc);
  double norm_all = 0.0, norm_imag = 0.0;
  for (const cplx& z : img.data) {
    norm_all += std::norm(z);
    norm_imag += z.imag() * z.imag();
  }
  rep.imag_residue_rel = norm_all > 0.0 ? std::sqrt(norm_imag / norm_all) : 0.0;
  out = real_part(img);
  rep.seconds = elapsed_seconds(start);
  return {std::move(out), rep};
}

std::pair<RealGrid, ReconstructionReport> reconstruct_wavelet(const MeasurementSet& meas,
                                                              const PipelineOptions& opts) {
  const auto start = clock_type::now();
  const int N = meas.N;
  const int depth = opts.wavelet_depth;
  const std::vector<size_t> idx = mask_flat_indices(meas.mask);

  ReconstructionReport rep;
  rep.scheme = "wave";
  rep.N = N;
  rep.J = depth;
  RealGrid out(N, N);
  if (idx.empty()) {
    rep.trivial = true;
    rep.per_shear.push_back({ShearIndex(0, 0), "wavelet", {}});
    rep.per_shear.back().report.converged = true;
    rep.converged_shears = 1;
    rep.seconds = elapsed_seconds(start);
    return {std::move(out), rep};
  }

  LinearMap A = shear_system_map(N, depth, depth, ShearIndex(0, 0), false, idx);
  const cvec rhs = gather(meas.samples, idx);
  auto [coeffs, report] = basis_pursuit(A, rhs, opts.solver);
  rep.per_shear.push_back({ShearIndex(0, 0), "wavelet", report});
  rep.converged_shears = report.converged ? 1 : 0;
  rep.degraded = !report.converged;

  ComplexGrid c = grid_from_vec(coeffs, N);
  ComplexGrid img = awt_inverse({std::move(c), depth, depth});
  double norm_all = 0.0, norm_imag = 0.0;
  for (const cplx& z : img.data) {
    norm_all += std::norm(z);
    norm_imag += z.imag() * z.imag();
  }
  rep.imag_residue_rel = norm_all > 0.0 ? std::sqrt(norm_imag / norm_all) : 0.0;
  out = real_part(img);
  rep.seconds = elapsed_seconds(start);
  return {std::move(out), rep};
}

int scheme_filter_count(int J) { return 2 * static_cast<int>(shear_set(J).size()); }

namespace {

std::string valid_scheme_ids() {
  std::string ids;
  for (int J : {2, 4, 6}) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "shear%02d", scheme_filter_count(J));
    ids += buf;
    ids += ", ";
  }
  return ids + "wave01, wave02";
}

}  // namespace

int scheme_J_from_id(const std::string& id) {
  for (int J : {2, 4, 6})
    if (id == "shear" + std::string(scheme_filter_count(J) < 10 ? "0" : "") +
                  std::to_string(scheme_filter_count(J)))
      return J;
  throw std::invalid_argument("unknown scheme id '" + id + "'; valid ids: " +
                              valid_scheme_ids());
}

bool scheme_is_directional(const std::string& id) {
  return id.rfind("shear", 0) == 0;
}

SamplingMask scheme_mask(const SchemeConfig& scheme, int N, double ratio, uint64_t seed) {
  if (scheme.id == "wave01") {
    SamplingMask m = baseline_radial_mask(N, ratio, seed);
    return m;
  }
  const int J = scheme.id == "wave02" ? scheme.J : scheme_J_from_id(scheme.id);
  const size_t target = std::max<size_t>(
      1, static_cast<size_t>(std::lround(ratio * static_cast<double>(N) * N)));
  SamplingMask mask = draw_mask_to_union(J, N, target, seed);
  mask.count_spec = "ratio=" + std::to_string(ratio);
  return mask;
}

std::string CompareResult::to_csv() const {
  std::string csv = "scheme,ratio,seed,psnr_db,seconds,converged_shears\n";
  char buf[192];
  for (const CompareRow& r : rows) {
    if (std::isinf(r.psnr_db))
      std::snprintf(buf, sizeof(buf), "%s,%.6g,%llu,inf,%.3f,%d\n", r.scheme.c_str(), r.ratio,
                    static_cast<unsigned long long>(r.seed), r.seconds, r.converged_shears);
    else
      std::snprintf(buf, sizeof(buf), "%s,%.6g,%llu,%.6f,%.3f,%d\n", r.scheme.c_str(), r.ratio,
                    static_cast<unsigned long long>(r.seed), r.psnr_db, r.seconds,
                    r.converged_shears);
    csv += buf;
  }
  return csv;
}

std::string CompareResult::to_json() const {
  std::string out = "{\n  \"rows\": [\n";
  char buf[256];
  for (size_t i = 0; i < rows.size(); ++i) {
    const CompareRow& r = rows[i];
    std::snprintf(buf, sizeof(buf),
                  "    {\"scheme\": \"%s\", \"ratio\": %.6g, \"seed\": %llu, \"psnr_db\": %s, "
                  "\"seconds\": %.3f, \"converged_shears\": %d}%s\n",
                  r.scheme.c_str(), r.ratio, static_cast<unsigned long long>(r.seed),
                  json_double(r.psnr_db).c_str(), r.seconds, r.converged_shears,
                  i + 1 < rows.size() ? "," : "");
    out += buf;
  }
  out += "  ]\n}\n";
  return out;
}

CompareResult compare_schemes(const RealGrid& ground_truth,
                              const std::vector<SchemeConfig>& schemes,
                              const std::vector<double>& ratios,
                              const std::vector<uint64_t>& seeds, const PipelineOptions& opts,
                              bool record_timing) {
  if (schemes.empty() || ratios.empty() || seeds.empty())
    throw std::invalid_argument("compare: need at least one scheme, ratio, and seed");
  const int N = ground_truth.rows;
  CompareResult result;
  for (const SchemeConfig& scheme : schemes) {
    std::optional<DirectionalFilterSet> filters;
    if (scheme_is_directional(scheme.id))
      filters = build_directional_filters(N, scheme_J_from_id(scheme.id));
    for (double ratio : ratios) {
      for (uint64_t seed : seeds) {
        const SamplingMask mask = scheme_mask(scheme, N, ratio, seed);
        const MeasurementSet meas = forward_measure(ground_truth, mask);
        auto [img, rep] = filters ? reconstruct_directional(meas, *filters, opts)
                                  : reconstruct_wavelet(meas, opts);
        CompareRow row;
        row.scheme = scheme.id;
        row.ratio = ratio;
        row.seed = seed;
        row.psnr_db = psnr(ground_truth, img);
        row.seconds = record_timing ? rep.seconds : 0.0;
        row.converged_shears = rep.converged_shears;
        rep.scheme = scheme.id;
        rep.psnr_db = row.psnr_db;
        result.rows.push_back(row);
        result.reports.push_back(std::move(rep));
      }
    }
  }
  return result;
}

}  // namespace cifg
