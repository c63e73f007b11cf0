#include "cifg/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>

namespace cifg {

namespace {

// FFTW planning is not thread-safe; execution on distinct buffers is.
// Plans are created once per (rows, cols, sign) with FFTW_ESTIMATE so
// results do not depend on runtime measurement.
class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  fftw_plan get2d(int rows, int cols, int sign) {
    std::lock_guard<std::mutex> lock(mutex_);
    auto key = std::tuple<int, int, int>(rows, cols, sign);
    auto it = plans2d_.find(key);
    if (it != plans2d_.end()) return it->second;
    std::vector<cplx> in(static_cast<size_t>(rows) * cols), out(in.size());
    fftw_plan p = fftw_plan_dft_2d(rows, cols, reinterpret_cast<fftw_complex*>(in.data()),
                                   reinterpret_cast<fftw_complex*>(out.data()), sign,
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
    plans2d_.emplace(key, p);
    return p;
  }

  fftw_plan get1d(int n, int sign) {
    std::lock_guard<std::mutex> lock(mutex_);
    auto key = std::pair<int, int>(n, sign);
    auto it = plans1d_.find(key);
    if (it != plans1d_.end()) return it->second;
    std::vector<cplx> in(static_cast<size_t>(n)), out(in.size());
    fftw_plan p = fftw_plan_dft_1d(n, reinterpret_cast<fftw_complex*>(in.data()),
                                   reinterpret_cast<fftw_complex*>(out.data()), sign,
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
    plans1d_.emplace(key, p);
    return p;
  }

 private:
  PlanCache() = default;
  std::mutex mutex_;
  std::map<std::tuple<int, int, int>, fftw_plan> plans2d_;
  std::map<std::pair<int, int>, fftw_plan> plans1d_;
};

ComplexGrid transform2d(const ComplexGrid& u, int sign) {
  fftw_plan plan = PlanCache::instance().get2d(u.rows, u.cols, sign);
  ComplexGrid out(u.rows, u.cols);
  // const_cast is safe: FFTW does not write the input of an out-of-place plan.
  fftw_execute_dft(plan,
                   reinterpret_cast<fftw_complex*>(const_cast<cplx*>(u.data.data())),
                   reinterpret_cast<fftw_complex*>(out.data.data()));
  return out;
}

void require_same_shape(int r1, int c1, int r2, int c2, const char* what) {
  if (r1 != r2 || c1 != c2) throw std::invalid_argument(std::string(what) + ": shape mismatch");
}

}  // namespace

ComplexGrid dft2(const RealGrid& u) { return dft2(to_complex(u)); }

ComplexGrid dft2(const ComplexGrid& u) {
  if (!all_finite(u)) throw std::invalid_argument("dft2: non-finite input sample");
  return transform2d(u, FFTW_FORWARD);
}

ComplexGrid idft2(const ComplexGrid& U) {
  if (!all_finite(U)) throw std::invalid_argument("idft2: non-finite input sample");
  ComplexGrid out = transform2d(U, FFTW_BACKWARD);
  const double scale = 1.0 / (static_cast<double>(U.rows) * U.cols);
  for (cplx& v : out.data) v *= scale;
  return out;
}

ComplexGrid circ_conv(const ComplexGrid& u, const ComplexGrid& h) {
  require_same_shape(u.rows, u.cols, h.rows, h.cols, "circ_conv");
  ComplexGrid U = dft2(u), H = dft2(h);
  for (size_t i = 0; i < U.data.size(); ++i) U.data[i] *= H.data[i];
  return idft2(U);
}

RealGrid circ_conv(const RealGrid& u, const RealGrid& h) {
  return real_part(circ_conv(to_complex(u), to_complex(h)));
}

double psnr(const RealGrid& u, const RealGrid& v, double peak) {
  require_same_shape(u.rows, u.cols, v.rows, v.cols, "psnr");
  if (!(peak > 0.0)) throw std::invalid_argument("psnr: peak must be positive");
  double mse = 0.0;
  for (size_t i = 0; i < u.data.size(); ++i) {
    double d = u.data[i] - v.data[i];
    mse += d * d;
  }
  mse /= static_cast<double>(u.data.size());
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(peak * peak / mse);
}

namespace detail {

void fft_rows_inplace(ComplexGrid& g, bool inverse) {
  fftw_plan plan = PlanCache::instance().get1d(g.cols, inverse ? FFTW_BACKWARD : FFTW_FORWARD);
  std::vector<cplx> out(static_cast<size_t>(g.cols));
  const double scale = 1.0 / g.cols;
  for (int r = 0; r < g.rows; ++r) {
    cplx* row = g.data.data() + static_cast<size_t>(r) * g.cols;
    fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(row),
                     reinterpret_cast<fftw_complex*>(out.data()));
    if (inverse)
      for (int c = 0; c < g.cols; ++c) row[c] = out[static_cast<size_t>(c)] * scale;
    else
      std::copy(out.begin(), out.end(), row);
  }
}

}  // namespace detail

}  // namespace cifg
