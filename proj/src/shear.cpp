#include "cifg/shear.hpp"

#include "cifg/fft.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace cifg {

ShearIndex::ShearIndex(int q_, int level_) : q(q_), level(level_) {
  if (level < 0) throw std::invalid_argument("ShearIndex: level must be nonnegative");
  if (q == 0) {
    if (level != 0) throw std::invalid_argument("ShearIndex: zero shear must have level 0");
  } else if (q % 2 == 0) {
    throw std::invalid_argument("ShearIndex: numerator must be odd");
  }
  if (std::abs(value()) > 1.0) throw std::invalid_argument("ShearIndex: |value| must be <= 1");
}

std::vector<ShearIndex> shear_set(int J) {
  if (J < 2 || J % 2 != 0)
    throw std::invalid_argument("shear_set: J must be a positive even integer");
  std::vector<ShearIndex> out;
  out.emplace_back(0, 0);
  for (int level = 1; level <= J / 2; ++level) {
    int denom = 1 << level;
    for (int q = -denom + 1; q < denom; q += 2) out.emplace_back(q, level);
  }
  std::sort(out.begin(), out.end());
  return out;
}

ComplexGrid digital_shear(const ComplexGrid& u, const ShearIndex& s, bool inverse) {
  if (u.rows != u.cols) throw std::invalid_argument("digital_shear: grid must be square");
  if (u.rows < 2 || (u.rows & (u.rows - 1)) != 0)
    throw std::invalid_argument("digital_shear: grid side must be a power of two");
  const int n = u.rows;
  const double slope = inverse ? -s.value() : s.value();
  if (slope == 0.0) return u;

  ComplexGrid out = u;
  detail::fft_rows_inplace(out, false);
  for (int r = 0; r < n; ++r) {
    const double shift = slope * centered_freq(r, n);
    cplx* row = out.data.data() + static_cast<size_t>(r) * n;
    for (int c = 0; c < n; ++c) {
      const double phase = -2.0 * std::numbers::pi * shift * centered_freq(c, n) / n;
      row[c] *= cplx(std::cos(phase), std::sin(phase));
    }
  }
  detail::fft_rows_inplace(out, true);
  return out;
}

RealGrid digital_shear(const RealGrid& u, const ShearIndex& s, bool inverse) {
  return real_part(digital_shear(to_complex(u), s, inverse));
}

}  // namespace cifg
