#include "cifg/sampling.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

namespace cifg {

namespace {

uint64_t splitmix64(uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

uint64_t fnv1a(uint64_t h, const void* bytes, size_t n) {
  const unsigned char* p = static_cast<const unsigned char*>(bytes);
  for (size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Fenwick tree over point masses; supports prefix-sum search and mass
// removal, which turns i.i.d.-with-dedup draws into an equivalent
// successive sampling without replacement.
class FenwickSampler {
 public:
  explicit FenwickSampler(const std::vector<double>& masses)
      : n_(masses.size()), tree_(masses.size() + 1, 0.0), mass_(masses), total_(0.0) {
    for (size_t i = 0; i < n_; ++i) {
      tree_[i + 1] += masses[i];
      size_t parent = (i + 1) + ((i + 1) & (~i));
      if (parent <= n_) tree_[parent] += tree_[i + 1];
    }
    for (double m : masses) total_ += m;
  }

  double total() const { return total_; }

  // Smallest index whose cumulative mass exceeds target. Rounding drift
  // in the maintained total can push the descent past the end or onto a
  // removed point; both cases fall back to the nearest remaining mass.
  size_t draw(double target) const {
    size_t idx = 0;
    size_t bit = 1;
    while (bit * 2 <= n_) bit *= 2;
    for (; bit > 0; bit /= 2) {
      size_t next = idx + bit;
      if (next <= n_ && tree_[next] <= target) {
        target -= tree_[next];
        idx = next;
      }
    }
    if (idx >= n_) idx = n_ - 1;
    while (idx > 0 && mass_[idx] == 0.0) --idx;
    while (mass_[idx] == 0.0) ++idx;
    return idx;
  }

  void remove(size_t idx) {
    const double m = mass_[idx];
    mass_[idx] = 0.0;
    total_ -= m;
    for (size_t i = idx + 1; i <= n_; i += i & (~i + 1)) tree_[i] -= m;
  }

 private:
  size_t n_;
  std::vector<double> tree_;
  std::vector<double> mass_;
  double total_;
};

FreqPoint point_from_flat(size_t flat, int N) {
  const int r = static_cast<int>(flat) / N;
  const int c = static_cast<int>(flat) % N;
  return {centered_freq(r, N), centered_freq(c, N)};
}

std::vector<double> grid_masses(const SamplingDensity& d) {
  std::vector<double> masses(static_cast<size_t>(d.N) * d.N);
  for (int r = 0; r < d.N; ++r)
    for (int c = 0; c < d.N; ++c)
      masses[static_cast<size_t>(r) * d.N + c] =
          d.unnormalized({centered_freq(r, d.N), centered_freq(c, d.N)});
  return masses;
}

// Successive sampling without replacement from one density; the draw
// sequence is distributionally identical to i.i.d. draws from `d` with
// duplicates discarded, and extending a stream keeps earlier draws.
class DrawStream {
 public:
  DrawStream(const SamplingDensity& d, uint64_t seed)
      : N_(d.N), sampler_(grid_masses(d)), stream_(seed) {}

  size_t domain_size() const { return static_cast<size_t>(N_) * N_; }
  size_t drawn() const { return drawn_; }
  bool exhausted() const { return drawn_ == domain_size(); }

  FreqPoint next() {
    const double target = stream_.next_unit() * sampler_.total();
    const size_t idx = sampler_.draw(target);
    sampler_.remove(idx);
    ++drawn_;
    return point_from_flat(idx, N_);
  }

 private:
  int N_;
  FenwickSampler sampler_;
  RandomStream stream_;
  size_t drawn_ = 0;
};

std::vector<FreqPoint> draw_distinct(const SamplingDensity& d, size_t count, uint64_t seed) {
  const size_t domain = static_cast<size_t>(d.N) * d.N;
  if (count > domain)
    throw std::invalid_argument("draw: requested more distinct points than the domain holds");
  DrawStream ds(d, seed);
  std::vector<FreqPoint> points;
  points.reserve(count);
  for (size_t i = 0; i < count; ++i) points.push_back(ds.next());
  std::sort(points.begin(), points.end());
  return points;
}

}  // namespace

uint64_t RandomStream::next_u64() { return splitmix64(state); }

double RandomStream::next_unit() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

uint64_t stream_seed(uint64_t seed, const ShearIndex& s, const std::string& cone_label) {
  uint64_t h = 0xcbf29ce484222325ULL;
  h = fnv1a(h, &seed, sizeof(seed));
  int32_t q = s.q, level = s.level;
  h = fnv1a(h, &q, sizeof(q));
  h = fnv1a(h, &level, sizeof(level));
  h = fnv1a(h, cone_label.data(), cone_label.size());
  uint64_t st = h;
  return splitmix64(st);
}

double SamplingDensity::unnormalized(const FreqPoint& n) const {
  const int lim = N / 2;
  if (n.n1 < -lim || n.n1 >= lim || n.n2 < -lim || n.n2 >= lim)
    throw std::invalid_argument("density: frequency outside the sampling domain");
  switch (kind) {
    case DensityKind::Continuum:
      return 1.0 / (static_cast<double>(J) * J * (1.0 + std::abs(n.n1)) *
                    (1.0 + std::abs(n.n2 - shear * n.n1)));
    case DensityKind::Discrete:
      return 1.0 / (std::pow(1.0 + std::abs(n.n1), exponent) *
                    std::pow(1.0 + std::abs(aniso * n.n2 - shear * n.n1), exponent));
    case DensityKind::RadialBaseline:
      return 1.0 / std::pow(1.0 + std::hypot(static_cast<double>(n.n1),
                                             static_cast<double>(n.n2)),
                            exponent);
  }
  throw std::logic_error("density: unknown kind");
}

double SamplingDensity::operator()(const FreqPoint& n) const {
  return norm_constant * unnormalized(n);
}

double normalize_constant(const std::function<double(const FreqPoint&)>& unnormalized, int N) {
  if (N < 1) throw std::invalid_argument("normalize: empty domain");
  double sum = 0.0;
  for (int r = 0; r < N; ++r)
    for (int c = 0; c < N; ++c) {
      const double m = unnormalized({centered_freq(r, N), centered_freq(c, N)});
      if (!(m > 0.0) || !std::isfinite(m))
        throw std::invalid_argument("normalize: point masses must be positive and finite");
      sum += m;
    }
  return 1.0 / sum;
}

namespace {

SamplingDensity finalize(SamplingDensity d) {
  d.norm_constant = normalize_constant([&d](const FreqPoint& n) { return d.unnormalized(n); }, d.N);
  return d;
}

}  // namespace

SamplingDensity density_continuum(int N, int J, double shear) {
  if (J < 1) throw std::invalid_argument("density: J must be positive");
  return finalize({DensityKind::Continuum, N, J, shear, 1.0, 1.0, 0.0});
}

SamplingDensity density_discrete(int N, int J, double shear, double exponent) {
  if (J < 1) throw std::invalid_argument("density: J must be positive");
  return finalize(
      {DensityKind::Discrete, N, J, shear, exponent, std::pow(2.0, J / 2.0), 0.0});
}

SamplingDensity density_discrete_aligned(int N, int J, double shear, double exponent) {
  if (J < 1) throw std::invalid_argument("density: J must be positive");
  return finalize({DensityKind::Discrete, N, J, shear, exponent, 1.0, 0.0});
}

SamplingDensity density_radial(int N, double exponent) {
  return finalize({DensityKind::RadialBaseline, N, 0, 0.0, exponent, 1.0, 0.0});
}

namespace {

SamplingDensity directional_density(int N, int J, double shear, double exponent,
                                    DensityVariant variant) {
  return variant == DensityVariant::Paper ? density_discrete(N, J, shear, exponent)
                                          : density_discrete_aligned(N, J, shear, exponent);
}

const char* variant_name(DensityVariant v) {
  return v == DensityVariant::Paper ? "paper" : "shear-aligned";
}

DensityVariant variant_from_name(const std::string& name) {
  if (name == "paper") return DensityVariant::Paper;
  if (name == "shear-aligned") return DensityVariant::ShearAligned;
  throw std::runtime_error("unknown density variant: " + name);
}

}  // namespace

std::vector<FreqPoint> raw_draws(const SamplingDensity& d, int count, RandomStream& stream) {
  std::vector<double> masses = grid_masses(d);
  std::vector<double> cdf(masses.size());
  double acc = 0.0;
  for (size_t i = 0; i < masses.size(); ++i) {
    acc += masses[i];
    cdf[i] = acc;
  }
  std::vector<FreqPoint> out;
  out.reserve(static_cast<size_t>(count));
  for (int i = 0; i < count; ++i) {
    const double target = stream.next_unit() * acc;
    const size_t idx = static_cast<size_t>(
        std::upper_bound(cdf.begin(), cdf.end(), target) - cdf.begin());
    out.push_back(point_from_flat(std::min(idx, masses.size() - 1), d.N));
  }
  return out;
}

std::vector<FreqPoint> SamplingMask::union_points() const {
  std::set<FreqPoint> all;
  for (const auto& e : entries) all.insert(e.points.begin(), e.points.end());
  return {all.begin(), all.end()};
}

size_t SamplingMask::union_size() const { return union_points().size(); }

std::vector<uint8_t> SamplingMask::membership(int rows, int cols) const {
  std::vector<uint8_t> keep(static_cast<size_t>(rows) * cols, 0);
  for (const auto& e : entries)
    for (const FreqPoint& p : e.points) {
      const int r = storage_index(p.n1, rows);
      const int c = storage_index(p.n2, cols);
      keep[static_cast<size_t>(r) * cols + c] = 1;
    }
  return keep;
}

SamplingMask draw_mask(int J, int N, int per_shear, uint64_t seed, double exponent,
                       DensityVariant variant) {
  if (per_shear < 1) throw std::invalid_argument("draw_mask: per-shear count must be >= 1");
  if (static_cast<size_t>(per_shear) > static_cast<size_t>(N) * N)
    throw std::invalid_argument("draw_mask: per-shear count exceeds the domain size");
  SamplingMask mask;
  mask.N = N;
  mask.J = J;
  mask.seed = seed;
  mask.density_exponent = exponent;
  mask.density_variant = variant_name(variant);
  mask.count_spec = "per_shear_m=" + std::to_string(per_shear);
  for (const char* cone : {"horizontal", "vertical"}) {
    for (const ShearIndex& s : shear_set(J)) {
      SamplingDensity d = directional_density(N, J, s.value(), exponent, variant);
      MaskEntry entry{s, cone,
                      draw_distinct(d, static_cast<size_t>(per_shear), stream_seed(seed, s, cone))};
      mask.entries.push_back(std::move(entry));
    }
  }
  return mask;
}

SamplingMask draw_mask_to_union(int J, int N, size_t target_union, uint64_t seed,
                                double exponent, DensityVariant variant) {
  const size_t domain = static_cast<size_t>(N) * N;
  if (target_union < 1 || target_union > domain)
    throw std::invalid_argument("draw_mask_to_union: target outside (0, N^2]");

  SamplingMask mask;
  mask.N = N;
  mask.J = J;
  mask.seed = seed;
  mask.density_exponent = exponent;
  mask.density_variant = variant_name(variant);
  mask.count_spec = "union_target=" + std::to_string(target_union);

  std::vector<DrawStream> streams;
  for (const char* cone : {"horizontal", "vertical"}) {
    for (const ShearIndex& s : shear_set(J)) {
      SamplingDensity d = directional_density(N, J, s.value(), exponent, variant);
      streams.emplace_back(d, stream_seed(seed, s, cone));
      mask.entries.push_back({s, cone, {}});
    }
  }

  // Equal per-shear counts: one draw per stream per round until the
  // union of all entries reaches the target.
  std::vector<uint8_t> seen(domain, 0);
  size_t union_count = 0;
  while (union_count < target_union && !streams.front().exhausted()) {
    for (size_t i = 0; i < streams.size(); ++i) {
      const FreqPoint p = streams[i].next();
      mask.entries[i].points.push_back(p);
      const size_t flat = static_cast<size_t>(storage_index(p.n1, N)) * N +
                          storage_index(p.n2, N);
      if (!seen[flat]) {
        seen[flat] = 1;
        ++union_count;
      }
    }
  }
  for (MaskEntry& e : mask.entries) std::sort(e.points.begin(), e.points.end());
  return mask;
}

SamplingMask baseline_radial_mask(int N, double ratio, uint64_t seed, double exponent) {
  if (!(ratio > 0.0) || ratio > 1.0)
    throw std::invalid_argument("baseline_radial_mask: ratio must be in (0, 1]");
  const size_t count = static_cast<size_t>(ratio * static_cast<double>(N) * N);
  if (count < 1) throw std::invalid_argument("baseline_radial_mask: ratio keeps no points");
  SamplingMask mask;
  mask.N = N;
  mask.J = 0;
  mask.seed = seed;
  mask.density_exponent = exponent;
  mask.count_spec = "ratio=" + std::to_string(ratio);
  SamplingDensity d = density_radial(N, exponent);
  mask.entries.push_back(
      {ShearIndex(0, 0), "radial", draw_distinct(d, count, stream_seed(seed, ShearIndex(0, 0), "radial"))});
  return mask;
}

ComplexGrid mask_apply(const ComplexGrid& U, const SamplingMask& mask) {
  if (U.rows != mask.N || U.cols != mask.N)
    throw std::invalid_argument("mask_apply: grid shape does not match mask");
  const std::vector<uint8_t> keep = mask.membership(U.rows, U.cols);
  ComplexGrid out(U.rows, U.cols);
  for (size_t i = 0; i < out.data.size(); ++i)
    if (keep[i]) out.data[i] = U.data[i];
  return out;
}

int theoretical_per_shear_count(int J, const ShearIndex& s, double rho) {
  const int j0 = s.q == 0 ? 0 : 2 * s.level - 1;
  const double m = std::pow(2.0, 0.5 * (J - j0)) * std::pow(2.0, 3.0 * J * rho);
  return std::max(1, static_cast<int>(std::lround(m)));
}

CardinalityReport cardinality_scaling_check(const std::vector<int>& J_values,
                                            const std::vector<size_t>& counts, double rho) {
  if (J_values.size() < 2 || J_values.size() != counts.size())
    throw std::invalid_argument("cardinality_scaling_check: need >= 2 paired (J, count) values");
  CardinalityReport rep;
  rep.J_values = J_values;
  rep.counts = counts;
  for (size_t i = 0; i < J_values.size(); ++i) {
    const double bound =
        J_values[i] * std::pow(2.0, 0.5 * J_values[i] * (1.0 + 6.0 * rho));
    rep.ratios.push_back(static_cast<double>(counts[i]) / bound);
  }
  const auto [mn, mx] = std::minmax_element(rep.ratios.begin(), rep.ratios.end());
  rep.band = *mx / *mn;
  rep.bounded = true;
  for (size_t i = 1; i < rep.ratios.size(); ++i)
    if (rep.ratios[i] > rep.ratios[i - 1] * 1.2) rep.bounded = false;
  return rep;
}

std::string mask_to_json(const SamplingMask& mask) {
  nlohmann::json j;
  j["version"] = 1;
  j["N"] = mask.N;
  j["J"] = mask.J;
  j["rho"] = mask.rho;
  j["seed"] = mask.seed;
  j["ratio_or_per_shear_m"] = mask.count_spec;
  j["draw_policy"] = mask.draw_policy;
  j["density_exponent"] = mask.density_exponent;
  j["density_variant"] = mask.density_variant;
  j["shears"] = nlohmann::json::array();
  for (const auto& e : mask.entries) {
    nlohmann::json points = nlohmann::json::array();
    for (const FreqPoint& p : e.points) points.push_back({p.n1, p.n2});
    j["shears"].push_back({{"q", e.shear.q},
                           {"level", e.shear.level},
                           {"cone", e.cone},
                           {"points", std::move(points)}});
  }
  return j.dump(2) + "\n";
}

SamplingMask mask_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  if (j.at("version").get<int>() != 1) throw std::runtime_error("mask: unsupported version");
  SamplingMask mask;
  mask.N = j.at("N").get<int>();
  mask.J = j.at("J").get<int>();
  mask.rho = j.at("rho").get<double>();
  mask.seed = j.at("seed").get<uint64_t>();
  mask.count_spec = j.at("ratio_or_per_shear_m").get<std::string>();
  mask.draw_policy = j.at("draw_policy").get<std::string>();
  mask.density_exponent = j.value("density_exponent", 5.0);
  mask.density_variant = j.value("density_variant", std::string("paper"));
  variant_from_name(mask.density_variant);  // validate
  const int lim = mask.N / 2;
  for (const auto& se : j.at("shears")) {
    MaskEntry e;
    e.shear = ShearIndex(se.at("q").get<int>(), se.at("level").get<int>());
    e.cone = se.at("cone").get<std::string>();
    for (const auto& p : se.at("points")) {
      FreqPoint fp{p.at(0).get<int>(), p.at(1).get<int>()};
      if (fp.n1 < -lim || fp.n1 >= lim || fp.n2 < -lim || fp.n2 >= lim)
        throw std::runtime_error("mask: point outside the centered grid");
      e.points.push_back(fp);
    }
    if (!std::is_sorted(e.points.begin(), e.points.end()))
      std::sort(e.points.begin(), e.points.end());
    if (std::adjacent_find(e.points.begin(), e.points.end()) != e.points.end())
      throw std::runtime_error("mask: duplicate points within a shear entry");
    mask.entries.push_back(std::move(e));
  }
  return mask;
}

void save_mask(const SamplingMask& mask, const std::string& json_path,
               const std::string& pgm_path) {
  std::ofstream os(json_path);
  if (!os) throw std::runtime_error("cannot open for writing: " + json_path);
  os << mask_to_json(mask);
  if (!os) throw std::runtime_error("write failed: " + json_path);
  if (!pgm_path.empty()) {
    RealGrid img(mask.N, mask.N);
    const std::vector<uint8_t> keep = mask.membership(mask.N, mask.N);
    // Render with DC at the image center, the usual k-space view.
    for (int r = 0; r < mask.N; ++r)
      for (int c = 0; c < mask.N; ++c) {
        const int src_r = storage_index(r - mask.N / 2, mask.N);
        const int src_c = storage_index(c - mask.N / 2, mask.N);
        img.at(r, c) = keep[static_cast<size_t>(src_r) * mask.N + src_c] ? 1.0 : 0.0;
      }
    write_pgm(pgm_path, img);
  }
}

SamplingMask load_mask(const std::string& json_path) {
  std::ifstream is(json_path);
  if (!is) throw std::runtime_error("cannot open: " + json_path);
  std::string text((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
  return mask_from_json(text);
}

}  // namespace cifg
