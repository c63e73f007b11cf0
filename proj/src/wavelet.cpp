#include "cifg/wavelet.hpp"

#include <cmath>
#include <vector>

namespace cifg {

const WaveletPair& default_wavelet() {
  static const WaveletPair pair = [] {
    WaveletPair p;
    p.lowpass = {0.230377813308855, 0.714846570552542,  0.630880767929590,
                 -0.027983769416984, -0.187034811718881, 0.030841381835987,
                 0.032883011666983, -0.010597401784997};
    for (int k = 0; k < WaveletPair::taps; ++k)
      p.highpass[static_cast<size_t>(k)] =
          (k % 2 == 0 ? 1.0 : -1.0) * p.lowpass[static_cast<size_t>(WaveletPair::taps - 1 - k)];
    return p;
  }();
  return pair;
}

namespace {

// One periodized analysis step on x[0..len): first half receives the
// coarse band, second half the detail band.
template <typename T>
void analysis_step(T* x, int len, std::vector<T>& scratch) {
  const WaveletPair& w = default_wavelet();
  const int half = len / 2;
  scratch.resize(static_cast<size_t>(len));
  for (int k = 0; k < half; ++k) {
    T lo{}, hi{};
    for (int t = 0; t < WaveletPair::taps; ++t) {
      const T v = x[(2 * k + t) % len];
      lo += v * w.lowpass[static_cast<size_t>(t)];
      hi += v * w.highpass[static_cast<size_t>(t)];
    }
    scratch[static_cast<size_t>(k)] = lo;
    scratch[static_cast<size_t>(half + k)] = hi;
  }
  for (int i = 0; i < len; ++i) x[i] = scratch[static_cast<size_t>(i)];
}

template <typename T>
void synthesis_step(T* x, int len, std::vector<T>& scratch) {
  const WaveletPair& w = default_wavelet();
  const int half = len / 2;
  scratch.assign(static_cast<size_t>(len), T{});
  for (int k = 0; k < half; ++k) {
    const T lo = x[k], hi = x[half + k];
    for (int t = 0; t < WaveletPair::taps; ++t)
      scratch[static_cast<size_t>((2 * k + t) % len)] +=
          lo * w.lowpass[static_cast<size_t>(t)] + hi * w.highpass[static_cast<size_t>(t)];
  }
  for (int i = 0; i < len; ++i) x[i] = scratch[static_cast<size_t>(i)];
}

void check_depth(int len, int depth, const char* axis) {
  if (depth < 0) throw std::invalid_argument("awt: negative depth");
  int limit = 0;
  for (int v = len; v % 2 == 0 && v > 1; v /= 2) ++limit;
  if (depth > limit)
    throw std::invalid_argument(std::string("awt: depth exceeds log2 of the ") + axis +
                                " length");
}

// Applies multilevel 1D transforms down each column (stride = cols) and
// along each row (stride = 1).
template <typename G>
void transform2d(G& g, int depth_rows, int depth_cols, bool inverse) {
  using T = typename std::decay_t<decltype(g.data)>::value_type;
  check_depth(g.rows, depth_rows, "row");
  check_depth(g.cols, depth_cols, "column");
  std::vector<T> line, scratch;

  auto run_lines = [&](bool along_rows, int depth) {
    const int count = along_rows ? g.rows : g.cols;
    const int len = along_rows ? g.cols : g.rows;
    for (int i = 0; i < count; ++i) {
      line.resize(static_cast<size_t>(len));
      for (int j = 0; j < len; ++j)
        line[static_cast<size_t>(j)] = along_rows ? g.at(i, j) : g.at(j, i);
      if (!inverse) {
        int sub = len;
        for (int d = 0; d < depth; ++d, sub /= 2) analysis_step(line.data(), sub, scratch);
      } else {
        int sub = len >> (depth > 0 ? depth - 1 : 0);
        for (int d = 0; d < depth; ++d, sub *= 2) synthesis_step(line.data(), sub, scratch);
      }
      for (int j = 0; j < len; ++j)
        (along_rows ? g.at(i, j) : g.at(j, i)) = line[static_cast<size_t>(j)];
    }
  };

  if (!inverse) {
    run_lines(false, depth_rows);
    run_lines(true, depth_cols);
  } else {
    run_lines(true, depth_cols);
    run_lines(false, depth_rows);
  }
}

}  // namespace

int awt_depth_rows(int J) { return J; }
int awt_depth_cols(int J) { return (J + 1) / 2; }

WaveletCoeffs awt_forward(const RealGrid& u, int depth_rows, int depth_cols) {
  WaveletCoeffs c{u, depth_rows, depth_cols};
  transform2d(c.grid, depth_rows, depth_cols, false);
  return c;
}

WaveletCoeffs awt_forward(const RealGrid& u, int J) {
  return awt_forward(u, awt_depth_rows(J), awt_depth_cols(J));
}

RealGrid awt_inverse(const WaveletCoeffs& c) {
  RealGrid out = c.grid;
  transform2d(out, c.depth_rows, c.depth_cols, true);
  return out;
}

WaveletCoeffsC awt_forward(const ComplexGrid& u, int depth_rows, int depth_cols) {
  WaveletCoeffsC c{u, depth_rows, depth_cols};
  transform2d(c.grid, depth_rows, depth_cols, false);
  return c;
}

ComplexGrid awt_inverse(const WaveletCoeffsC& c) {
  ComplexGrid out = c.grid;
  transform2d(out, c.depth_rows, c.depth_cols, true);
  return out;
}

}  // namespace cifg
