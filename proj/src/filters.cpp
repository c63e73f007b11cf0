#include "cifg/filters.hpp"

#include "cifg/fft.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

namespace cifg {

namespace {

// Angular weight of the scale-j annulus in the horizontal cone: full
// weight on slopes |k2/k1| <= 2^(-j/2), smooth rolloff to zero by twice
// that, so wedges narrow parabolically with scale and the finest-scale
// width matches the shear spacing 2^(-J/2).
double cone_weight(int k1, int k2, int j) {
  const double a1 = std::abs(static_cast<double>(k1));
  const double a2 = std::abs(static_cast<double>(k2));
  if (a2 == 0.0) return 1.0;
  if (a1 == 0.0) return 0.0;
  const double w = meyer_lowpass((a2 / a1) * std::pow(2.0, 0.5 * j));
  return w * w;
}

}  // namespace

const char* cone_name(Cone c) { return c == Cone::Horizontal ? "horizontal" : "vertical"; }

Cone cone_from_name(const std::string& name) {
  if (name == "horizontal") return Cone::Horizontal;
  if (name == "vertical") return Cone::Vertical;
  throw std::invalid_argument("unknown cone name: " + name);
}

const DirectionalFilter& DirectionalFilterSet::find(const ShearIndex& s, Cone cone) const {
  for (const auto& f : filters)
    if (f.shear == s && f.cone == cone) return f;
  throw std::out_of_range("filter set has no entry for requested shear/cone");
}

ComplexGrid base_filter_spectrum(const ScaleWindows& w) {
  const int n = w.N;
  ComplexGrid g0(n, n);
  for (int r = 0; r < n; ++r) {
    const int k1 = centered_freq(r, n);
    for (int c = 0; c < n; ++c) {
      const int k2 = centered_freq(c, n);
      double v = w.scaling_sq.at(r, c);
      for (int j = 0; j <= w.J; ++j)
        v += w.detail_sq[static_cast<size_t>(j)].at(r, c) * cone_weight(k1, k2, j);
      g0.at(r, c) = cplx(v, 0.0);
    }
  }
  return g0;
}

std::vector<ComplexGrid> derive_duals(const std::vector<DirectionalFilter>& filters,
                                      double* c_low_out) {
  if (filters.empty()) throw std::invalid_argument("derive_duals: empty filter list");
  const int rows = filters.front().spectrum.rows;
  const int cols = filters.front().spectrum.cols;
  RealGrid energy(rows, cols);
  for (const auto& f : filters)
    for (size_t i = 0; i < f.spectrum.data.size(); ++i)
      energy.data[i] += std::norm(f.spectrum.data[i]);

  double c_low = energy.data[0];
  size_t argmin = 0;
  for (size_t i = 1; i < energy.data.size(); ++i)
    if (energy.data[i] < c_low) {
      c_low = energy.data[i];
      argmin = i;
    }
  if (c_low <= 1e-8) {
    const int r = static_cast<int>(argmin) / cols, c = static_cast<int>(argmin) % cols;
    throw std::runtime_error("directional filter energy degenerates at frequency (" +
                             std::to_string(centered_freq(r, rows)) + ", " +
                             std::to_string(centered_freq(c, cols)) + ")");
  }
  if (c_low_out) *c_low_out = c_low;

  std::vector<ComplexGrid> duals;
  duals.reserve(filters.size());
  for (const auto& f : filters) {
    ComplexGrid d(rows, cols);
    for (size_t i = 0; i < d.data.size(); ++i)
      d.data[i] = std::conj(f.spectrum.data[i]) / energy.data[i];
    duals.push_back(std::move(d));
  }
  return duals;
}

DirectionalFilterSet build_directional_filters(int N, int J) {
  const ScaleWindows windows = build_scale_windows(N, J);
  const ComplexGrid g0 = base_filter_spectrum(windows);

  DirectionalFilterSet fs;
  fs.N = N;
  fs.J = J;
  for (Cone cone : {Cone::Horizontal, Cone::Vertical}) {
    for (const ShearIndex& s : shear_set(J)) {
      DirectionalFilter f;
      f.shear = s;
      f.cone = cone;
      ComplexGrid sheared = digital_shear(g0, s);
      f.spectrum = (cone == Cone::Horizontal) ? std::move(sheared) : transpose(sheared);
      fs.filters.push_back(std::move(f));
    }
  }

  std::vector<ComplexGrid> duals = derive_duals(fs.filters, &fs.c_low);
  for (size_t i = 0; i < fs.filters.size(); ++i) fs.filters[i].dual = std::move(duals[i]);
  return fs;
}

ComplexGrid filter_bank_roundtrip(const DirectionalFilterSet& fs, const ComplexGrid& u) {
  if (u.rows != fs.N || u.cols != fs.N)
    throw std::invalid_argument("filter_bank_roundtrip: grid size does not match filter set");
  ComplexGrid spectrum = dft2(u);
  ComplexGrid acc(fs.N, fs.N);
  for (const auto& f : fs.filters)
    for (size_t i = 0; i < acc.data.size(); ++i)
      acc.data[i] += f.dual.data[i] * f.spectrum.data[i] * spectrum.data[i];
  return idft2(acc);
}

void save_filter_set(const DirectionalFilterSet& fs, const std::string& dir) {
  namespace fs_std = std::filesystem;
  fs_std::create_directories(dir);
  nlohmann::json manifest;
  manifest["N"] = fs.N;
  manifest["J"] = fs.J;
  manifest["c_low"] = fs.c_low;
  manifest["shears"] = nlohmann::json::array();
  for (size_t i = 0; i < fs.filters.size(); ++i) {
    const auto& f = fs.filters[i];
    const std::string stem =
        "g" + std::to_string(i) + "_" + cone_name(f.cone) + "_q" + std::to_string(f.shear.q) +
        "_l" + std::to_string(f.shear.level);
    write_cifg(dir + "/" + stem + ".cifg", f.spectrum);
    write_cifg(dir + "/" + stem + "_dual.cifg", f.dual);
    manifest["shears"].push_back({{"q", f.shear.q},
                                  {"level", f.shear.level},
                                  {"cone", cone_name(f.cone)},
                                  {"file", stem}});
  }
  std::ofstream os(dir + "/manifest.json");
  if (!os) throw std::runtime_error("cannot write manifest in " + dir);
  os << manifest.dump(2) << "\n";
}

DirectionalFilterSet load_filter_set(const std::string& dir) {
  std::ifstream is(dir + "/manifest.json");
  if (!is) throw std::runtime_error("cannot open manifest in " + dir);
  nlohmann::json manifest = nlohmann::json::parse(is);
  DirectionalFilterSet fs;
  fs.N = manifest.at("N").get<int>();
  fs.J = manifest.at("J").get<int>();
  fs.c_low = manifest.at("c_low").get<double>();
  for (const auto& entry : manifest.at("shears")) {
    DirectionalFilter f;
    f.shear = ShearIndex(entry.at("q").get<int>(), entry.at("level").get<int>());
    f.cone = cone_from_name(entry.at("cone").get<std::string>());
    const std::string stem = entry.at("file").get<std::string>();
    f.spectrum = read_cifg_complex(dir + "/" + stem + ".cifg");
    f.dual = read_cifg_complex(dir + "/" + stem + "_dual.cifg");
    fs.filters.push_back(std::move(f));
  }
  return fs;
}

}  // namespace cifg
