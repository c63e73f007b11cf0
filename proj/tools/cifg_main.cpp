#include "cifg/fft.hpp"
#include "cifg/filters.hpp"
#include "cifg/grid.hpp"
#include "cifg/l1.hpp"
#include "cifg/phantom.hpp"
#include "cifg/pipeline.hpp"
#include "cifg/sampling.hpp"
#include "cifg/version.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace {

using nlohmann::json;

// Usage/config problems exit with 2, computation failures with 1.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_text_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open: " + path);
  return {std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
}

void require_parent_dir(const std::string& prefix) {
  const auto parent = std::filesystem::path(prefix).parent_path();
  if (!parent.empty() && !std::filesystem::is_directory(parent))
    throw ConfigError("output directory does not exist: " + parent.string());
}

void write_text_file(const std::string& path, const std::string& text) {
  require_parent_dir(path);
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  os << text;
  if (!os) throw std::runtime_error("write failed: " + path);
}

uint64_t default_seed() {
  if (const char* env = std::getenv("CIFG_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw ConfigError("CIFG_SEED is not an unsigned integer");
    }
  }
  return 1;
}

json config_json(const json& params) {
  return json{{"version", cifg::kVersion}, {"config", params}};
}

struct SolverFlags {
  int max_iterations = 1500;
  double residual_tol = 0.0;
  double relative_tol = 1e-3;
  double threshold = 0.0;
  double relaxation = 1.0;

  void attach(CLI::App* cmd) {
    cmd->add_option("--max-iterations", max_iterations, "solver iteration budget");
    cmd->add_option("--residual-tol", residual_tol,
                    "absolute residual tolerance (0 = 1e-7 * ||y||)");
    cmd->add_option("--relative-tol", relative_tol, "relative-change stopping tolerance");
    cmd->add_option("--threshold", threshold, "soft-threshold level (0 = automatic)");
    cmd->add_option("--relaxation", relaxation, "splitting relaxation in (0,2)");
  }

  cifg::SolverOptions options() const {
    cifg::SolverOptions o;
    o.max_iterations = max_iterations;
    o.residual_tol = residual_tol;
    o.relative_tol = relative_tol;
    o.threshold = threshold;
    o.relaxation = relaxation;
    return o;
  }

  json echo() const {
    return json{{"max_iterations", max_iterations},
                {"residual_tol", residual_tol},
                {"relative_tol", relative_tol},
                {"threshold", threshold},
                {"relaxation", relaxation}};
  }
};

cifg::SamplingMask mask_for_cli(const std::string& scheme, int N, int J, double ratio,
                                int per_shear, uint64_t seed, double exponent,
                                double radial_exponent) {
  if (scheme == "wave01") {
    if (ratio <= 0.0) throw ConfigError("radial masks need --ratio");
    return cifg::baseline_radial_mask(N, ratio, seed, radial_exponent);
  }
  if (!cifg::scheme_is_directional(scheme))
    throw ConfigError("unknown mask scheme '" + scheme +
                      "'; valid: shear06, shear14, shear30 (directional), wave01 (radial)");
  const int scheme_J = cifg::scheme_J_from_id(scheme);
  if (J > 0 && J != scheme_J) throw ConfigError("--finest-scale conflicts with scheme id");
  int m = per_shear;
  if (m > 0) return cifg::draw_mask(scheme_J, N, m, seed, exponent);
  if (ratio <= 0.0) throw ConfigError("directional masks need --ratio or --per-shear-m");
  const auto target = static_cast<size_t>(std::lround(ratio * N * N));
  cifg::SamplingMask mask = cifg::draw_mask_to_union(scheme_J, N, std::max<size_t>(1, target),
                                                     seed, exponent);
  mask.count_spec = "ratio=" + std::to_string(ratio);
  return mask;
}

int run(int argc, char** argv) {
  CLI::App app{"Directional Fourier subsampling and l1 reconstruction toolkit"};
  app.require_subcommand(1);

  // ---- phantom ----
  auto* cmd_phantom = app.add_subcommand("phantom", "render a piecewise-smooth test image");
  std::string phantom_spec, phantom_out;
  cmd_phantom->add_option("--spec", phantom_spec, "phantom spec JSON")->required();
  cmd_phantom->add_option("--out", phantom_out, "output prefix (.cifg/.pgm)")->required();

  // ---- mask ----
  auto* cmd_mask = app.add_subcommand("mask", "draw a sampling mask");
  int mask_N = 256, mask_J = 0, mask_m = 0;
  double mask_ratio = 0.0, mask_exp = 5.0, mask_radial_exp = 2.0, mask_rho = 0.0;
  std::string mask_scheme = "shear14", mask_out;
  uint64_t mask_seed = default_seed();
  cmd_mask->add_option("--grid-size", mask_N, "grid side N")->required();
  cmd_mask->add_option("--scheme", mask_scheme, "shearNN (directional) or wave01 (radial)");
  cmd_mask->add_option("--finest-scale", mask_J, "finest scale J (consistency check)");
  cmd_mask->add_option("--ratio", mask_ratio, "target fraction of kept frequencies");
  cmd_mask->add_option("--per-shear-m", mask_m, "points per (shear, cone) stream");
  cmd_mask->add_option("--seed", mask_seed, "draw seed (default CIFG_SEED or 1)");
  cmd_mask->add_option("--rho", mask_rho, "oversampling exponent recorded in the manifest");
  cmd_mask->add_option("--density-exponent", mask_exp, "discrete density exponent");
  cmd_mask->add_option("--radial-exponent", mask_radial_exp, "radial baseline exponent");
  cmd_mask->add_option("--out", mask_out, "output prefix (.json/.pgm)")->required();

  // ---- measure ----
  auto* cmd_measure = app.add_subcommand("measure", "masked Fourier measurements of an image");
  std::string measure_image, measure_mask, measure_out;
  cmd_measure->add_option("--image", measure_image, "input image CIFG")->required();
  cmd_measure->add_option("--mask", measure_mask, "mask JSON")->required();
  cmd_measure->add_option("--out", measure_out, "output CIFG (complex spectrum)")->required();

  // ---- reconstruct ----
  auto* cmd_rec = app.add_subcommand("reconstruct", "reconstruct an image from masked spectra");
  std::string rec_image, rec_meas, rec_mask, rec_scheme = "shear14", rec_out;
  int rec_threads = 1, rec_wavelet_depth = 4;
  bool rec_strict = false;
  SolverFlags rec_solver;
  cmd_rec->add_option("--image", rec_image, "ground-truth image CIFG (measured internally)");
  cmd_rec->add_option("--measurements", rec_meas, "measurement CIFG (no ground truth)");
  cmd_rec->add_option("--mask", rec_mask, "mask JSON")->required();
  cmd_rec->add_option("--scheme", rec_scheme, "shearNN, wave01, or wave02");
  cmd_rec->add_option("--wavelet-depth", rec_wavelet_depth, "isotropic depth of the baseline");
  cmd_rec->add_option("--threads", rec_threads, "concurrent per-shear solves");
  cmd_rec->add_flag("--strict", rec_strict, "fail (exit 1) on any non-converged shear");
  rec_solver.attach(cmd_rec);
  cmd_rec->add_option("--out", rec_out, "output prefix (.cifg/.pgm/.report.json)")->required();

  // ---- compare ----
  auto* cmd_cmp = app.add_subcommand("compare", "PSNR/runtime matrix over schemes");
  std::string cmp_image, cmp_config, cmp_out;
  int cmp_threads = 1;
  cmd_cmp->add_option("--image", cmp_image, "ground-truth image CIFG")->required();
  cmd_cmp->add_option("--config", cmp_config, "comparison config JSON")->required();
  cmd_cmp->add_option("--threads", cmp_threads, "concurrent per-shear solves");
  cmd_cmp->add_option("--out", cmp_out, "output prefix (.csv/.json)")->required();

  // ---- riptest ----
  auto* cmd_rip = app.add_subcommand("riptest", "empirical restricted isometry estimate");
  int rip_N = 16, rip_J = 2, rip_count = 16, rip_k = 2, rip_columns = 16;
  uint64_t rip_seed = default_seed();
  std::string rip_out;
  cmd_rip->add_option("--grid-size", rip_N, "grid side N");
  cmd_rip->add_option("--finest-scale", rip_J, "finest scale J");
  cmd_rip->add_option("--count", rip_count, "number of sampled frequencies m");
  cmd_rip->add_option("--k", rip_k, "sparsity level");
  cmd_rip->add_option("--columns", rip_columns, "number of synthesis columns");
  cmd_rip->add_option("--seed", rip_seed, "mask draw seed");
  cmd_rip->add_option("--out", rip_out, "output JSON (stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help/--version
    app.exit(e);
    return 2;
  }

  if (cmd_phantom->parsed()) {
    cifg::PhantomSpec spec;
    try {
      spec = cifg::PhantomSpec::from_json(read_text_file(phantom_spec));
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      throw ConfigError(std::string("bad phantom spec: ") + e.what());
    }
    require_parent_dir(phantom_out);
    cifg::RealGrid img = cifg::render(spec);
    cifg::write_cifg(phantom_out + ".cifg", img);
    cifg::write_pgm(phantom_out + ".pgm", img);
    json meta = config_json(json::parse(spec.to_json()));
    write_text_file(phantom_out + ".meta.json", meta.dump(2) + "\n");
    std::cout << "wrote " << phantom_out << ".cifg (" << img.rows << "x" << img.cols << ")\n";
    return 0;
  }

  if (cmd_mask->parsed()) {
    require_parent_dir(mask_out);
    cifg::SamplingMask mask = mask_for_cli(mask_scheme, mask_N, mask_J, mask_ratio, mask_m,
                                           mask_seed, mask_exp, mask_radial_exp);
    mask.rho = mask_rho;
    cifg::save_mask(mask, mask_out + ".json", mask_out + ".pgm");
    std::cout << "wrote " << mask_out << ".json with " << mask.union_size()
              << " kept frequencies\n";
    return 0;
  }

  if (cmd_measure->parsed()) {
    require_parent_dir(measure_out);
    const cifg::RealGrid img = cifg::read_cifg_real(measure_image);
    const cifg::SamplingMask mask = cifg::load_mask(measure_mask);
    if (img.rows != mask.N || img.cols != mask.N)
      throw ConfigError("image and mask grid sizes differ");
    const cifg::MeasurementSet meas = cifg::forward_measure(img, mask);
    cifg::write_cifg(measure_out, meas.samples);
    std::cout << "wrote " << measure_out << "\n";
    return 0;
  }

  if (cmd_rec->parsed()) {
    require_parent_dir(rec_out);
    if (rec_image.empty() == rec_meas.empty())
      throw ConfigError("need exactly one of --image or --measurements");
    const cifg::SamplingMask mask = cifg::load_mask(rec_mask);

    cifg::MeasurementSet meas;
    std::optional<cifg::RealGrid> truth;
    if (!rec_image.empty()) {
      truth = cifg::read_cifg_real(rec_image);
      if (truth->rows != mask.N || truth->cols != mask.N)
        throw ConfigError("image and mask grid sizes differ");
      meas = cifg::forward_measure(*truth, mask);
    } else {
      meas.N = mask.N;
      meas.mask = mask;
      meas.samples = cifg::read_cifg_complex(rec_meas);
      if (meas.samples.rows != mask.N || meas.samples.cols != mask.N)
        throw ConfigError("measurements and mask grid sizes differ");
      meas.samples = cifg::mask_apply(meas.samples, mask);
    }

    cifg::PipelineOptions popts;
    popts.solver = rec_solver.options();
    popts.threads = rec_threads;
    popts.wavelet_depth = rec_wavelet_depth;

    std::pair<cifg::RealGrid, cifg::ReconstructionReport> result = [&] {
      if (cifg::scheme_is_directional(rec_scheme)) {
        const int J = cifg::scheme_J_from_id(rec_scheme);
        const auto filters = cifg::build_directional_filters(mask.N, J);
        return cifg::reconstruct_directional(meas, filters, popts);
      }
      if (rec_scheme != "wave01" && rec_scheme != "wave02")
        throw ConfigError("unknown scheme id '" + rec_scheme +
                          "'; valid ids: shear06, shear14, shear30, wave01, wave02");
      return cifg::reconstruct_wavelet(meas, popts);
    }();

    cifg::ReconstructionReport& rep = result.second;
    rep.scheme = rec_scheme;
    if (truth) rep.psnr_db = cifg::psnr(*truth, result.first);
    json params = {{"scheme", rec_scheme},      {"mask", rec_mask},
                   {"N", mask.N},               {"threads", rec_threads},
                   {"strict", rec_strict},      {"wavelet_depth", rec_wavelet_depth},
                   {"solver", rec_solver.echo()}};
    rep.config_echo = config_json(params).dump();

    cifg::write_cifg(rec_out + ".cifg", result.first);
    cifg::write_pgm(rec_out + ".pgm", result.first);
    write_text_file(rec_out + ".report.json", rep.to_json());
    std::cout << "scheme " << rec_scheme << ": " << rep.converged_shears << "/"
              << rep.per_shear.size() << " subproblems converged";
    if (rep.psnr_db) std::cout << ", psnr " << *rep.psnr_db << " dB";
    std::cout << "\n";
    if (rec_strict && rep.converged_shears != static_cast<int>(rep.per_shear.size())) {
      std::cerr << "strict mode: at least one subproblem did not converge\n";
      return 1;
    }
    return 0;
  }

  if (cmd_cmp->parsed()) {
    require_parent_dir(cmp_out);
    const cifg::RealGrid img = cifg::read_cifg_real(cmp_image);
    json cfg;
    try {
      cfg = json::parse(read_text_file(cmp_config));
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      throw ConfigError(std::string("bad comparison config: ") + e.what());
    }

    std::vector<cifg::SchemeConfig> schemes;
    for (const auto& s : cfg.at("schemes")) {
      cifg::SchemeConfig sc;
      sc.id = s.at("id").get<std::string>();
      sc.J = s.value("J", 4);
      if (cifg::scheme_is_directional(sc.id)) cifg::scheme_J_from_id(sc.id);  // validate
      else if (sc.id != "wave01" && sc.id != "wave02")
        throw ConfigError("unknown scheme id '" + sc.id +
                          "'; valid ids: shear06, shear14, shear30, wave01, wave02");
      schemes.push_back(sc);
    }
    const auto ratios = cfg.at("ratios").get<std::vector<double>>();
    const auto seeds = cfg.at("seeds").get<std::vector<uint64_t>>();

    cifg::PipelineOptions popts;
    popts.threads = cmp_threads;
    popts.wavelet_depth = cfg.value("wavelet_depth", 4);
    if (cfg.contains("solver")) {
      const auto& s = cfg.at("solver");
      popts.solver.max_iterations = s.value("max_iterations", popts.solver.max_iterations);
      popts.solver.residual_tol = s.value("residual_tol", popts.solver.residual_tol);
      popts.solver.relative_tol = s.value("relative_tol", popts.solver.relative_tol);
      popts.solver.threshold = s.value("threshold", popts.solver.threshold);
      popts.solver.relaxation = s.value("relaxation", popts.solver.relaxation);
    }
    const bool timing = cfg.value("timing", true);

    cifg::CompareResult result =
        cifg::compare_schemes(img, schemes, ratios, seeds, popts, timing);
    write_text_file(cmp_out + ".csv", result.to_csv());
    json full = config_json(cfg);
    full["rows"] = json::parse(result.to_json()).at("rows");
    write_text_file(cmp_out + ".json", full.dump(2) + "\n");
    std::cout << result.to_csv();
    return 0;
  }

  if (cmd_rip->parsed()) {
    const cifg::SamplingMask mask = cifg::draw_mask(rip_J, rip_N, rip_count, rip_seed);
    // shear-0 horizontal stream; synthesis columns walk the coefficient
    // grid row-major from the coarsest band
    const auto& entry = mask.entries.front();
    cifg::SamplingDensity density = cifg::density_discrete(rip_N, rip_J, 0.0);
    std::vector<size_t> idx;
    std::vector<double> probs;
    for (const cifg::FreqPoint& p : entry.points) {
      idx.push_back(static_cast<size_t>(cifg::storage_index(p.n1, rip_N)) * rip_N +
                    cifg::storage_index(p.n2, rip_N));
      probs.push_back(density(p));
    }
    const int d_rows = cifg::awt_depth_rows(rip_J), d_cols = cifg::awt_depth_cols(rip_J);
    auto synth = [&](int col) {
      cifg::ComplexGrid c(rip_N, rip_N);
      c.data[static_cast<size_t>(col)] = 1.0;
      cifg::ComplexGrid im = cifg::awt_inverse({std::move(c), d_rows, d_cols});
      return cifg::dft2(im);
    };
    const Eigen::MatrixXcd A = cifg::weighted_matrix(
        idx, probs, static_cast<double>(entry.points.size()), rip_N, synth, rip_columns);
    const cifg::RipEstimate est = cifg::rip_constant(A, rip_k);
    json out = config_json(json{{"grid_size", rip_N},
                                {"finest_scale", rip_J},
                                {"count", rip_count},
                                {"k", rip_k},
                                {"columns", rip_columns},
                                {"seed", rip_seed}});
    out["delta"] = est.delta;
    out["exhaustive"] = est.exhaustive;
    out["supports_checked"] = est.supports_checked;
    if (!est.exhaustive) out["note"] = "randomized supports; delta is a lower bound";
    if (rip_out.empty())
      std::cout << out.dump(2) << "\n";
    else
      write_text_file(rip_out, out.dump(2) + "\n");
    return 0;
  }

  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
