#include "cifg/phantom.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <stdexcept>

namespace cifg {

namespace {

const char* kind_name(PhantomKind k) {
  switch (k) {
    case PhantomKind::Disk: return "disk";
    case PhantomKind::Ellipse: return "ellipse";
    case PhantomKind::TwoRegionSmooth: return "two-region-smooth";
  }
  throw std::logic_error("unknown kind");
}

PhantomKind kind_from_name(const std::string& s) {
  if (s == "disk") return PhantomKind::Disk;
  if (s == "ellipse") return PhantomKind::Ellipse;
  if (s == "two-region-smooth") return PhantomKind::TwoRegionSmooth;
  throw std::invalid_argument("unknown phantom kind: " + s);
}

}  // namespace

PhantomSpec PhantomSpec::from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  PhantomSpec s;
  s.kind = kind_from_name(j.at("kind").get<std::string>());
  s.N = j.at("N").get<int>();
  s.center_x1 = j.at("center").at(0).get<double>();
  s.center_x2 = j.at("center").at(1).get<double>();
  s.radius_x1 = j.at("radius").at(0).get<double>();
  s.radius_x2 = j.at("radius").at(1).get<double>();
  if (j.contains("background"))
    for (int i = 0; i < 3; ++i) s.background[i] = j.at("background").at(i).get<double>();
  s.jump = j.value("jump", 1.0);
  return s;
}

std::string PhantomSpec::to_json() const {
  nlohmann::json j;
  j["kind"] = kind_name(kind);
  j["N"] = N;
  j["center"] = {center_x1, center_x2};
  j["radius"] = {radius_x1, radius_x2};
  j["background"] = {background[0], background[1], background[2]};
  j["jump"] = jump;
  return j.dump(2) + "\n";
}

RealGrid render(const PhantomSpec& spec) {
  if (spec.N < 2 || (spec.N & (spec.N - 1)) != 0)
    throw std::invalid_argument("render: N must be a power of two");
  const double r1 = spec.radius_x1;
  const double r2 = spec.kind == PhantomKind::Disk ? spec.radius_x1 : spec.radius_x2;
  if (!(r1 > 0.0) || !(r2 > 0.0)) throw std::invalid_argument("render: radii must be positive");
  if (spec.center_x1 - r1 < 0.0 || spec.center_x1 + r1 > 1.0 || spec.center_x2 - r2 < 0.0 ||
      spec.center_x2 + r2 > 1.0)
    throw std::invalid_argument("render: region escapes the unit square");

  RealGrid g(spec.N, spec.N);
  double lo = 0.0, hi = 0.0;
  for (int i = 0; i < spec.N; ++i) {
    const double x1 = (i + 0.5) / spec.N;
    for (int j = 0; j < spec.N; ++j) {
      const double x2 = (j + 0.5) / spec.N;
      double v = spec.background[0] + spec.background[1] * x1 + spec.background[2] * x2;
      const double d1 = (x1 - spec.center_x1) / r1;
      const double d2 = (x2 - spec.center_x2) / r2;
      if (d1 * d1 + d2 * d2 < 1.0) {
        if (spec.kind == PhantomKind::TwoRegionSmooth)
          v += spec.jump * (1.0 + (x1 - spec.center_x1) + (x2 - spec.center_x2)) / 3.0;
        else
          v += spec.jump;
      }
      g.at(i, j) = v;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  if (lo < -1e-12 || hi > 1.0 + 1e-12)
    throw std::invalid_argument("render: intensities leave [0,1]");
  return g;
}

PhantomSpec default_disk_phantom(int N) {
  PhantomSpec s;
  s.kind = PhantomKind::Disk;
  s.N = N;
  s.center_x1 = 0.5;
  s.center_x2 = 0.5;
  s.radius_x1 = s.radius_x2 = 0.25;
  s.background[0] = 0.15;
  s.background[1] = 0.15;
  s.background[2] = 0.1;
  s.jump = 0.55;
  return s;
}

}  // namespace cifg
