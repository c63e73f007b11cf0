#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace cifg {

using cplx = std::complex<double>;

// N x N (or rows x cols) raster with row-major storage. The first index n1
// is the row, the second index n2 is the column.
struct RealGrid {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;

  RealGrid() = default;
  RealGrid(int r, int c, double fill = 0.0);

  double& at(int r, int c) { return data[static_cast<size_t>(r) * cols + c]; }
  double at(int r, int c) const { return data[static_cast<size_t>(r) * cols + c]; }
  size_t size() const { return data.size(); }
};

struct ComplexGrid {
  int rows = 0;
  int cols = 0;
  std::vector<cplx> data;

  ComplexGrid() = default;
  ComplexGrid(int r, int c, cplx fill = cplx(0.0, 0.0));

  cplx& at(int r, int c) { return data[static_cast<size_t>(r) * cols + c]; }
  cplx at(int r, int c) const { return data[static_cast<size_t>(r) * cols + c]; }
  size_t size() const { return data.size(); }
};

// Frequency indexing is centered: spectra carry frequencies in [-N/2, N/2)
// per axis while storage keeps DC at index (0,0), the standard DFT layout.
// centered_freq maps a storage index to its signed frequency and
// storage_index inverts it (mod N).
inline int centered_freq(int storage, int n) {
  return storage < (n + 1) / 2 ? storage : storage - n;
}
inline int storage_index(int freq, int n) {
  int m = freq % n;
  return m < 0 ? m + n : m;
}

ComplexGrid to_complex(const RealGrid& g);
RealGrid real_part(const ComplexGrid& g);
double max_abs_imag(const ComplexGrid& g);

bool all_finite(const RealGrid& g);
bool all_finite(const ComplexGrid& g);

ComplexGrid transpose(const ComplexGrid& g);

// CIFG v1 container: magic "CIFG", u8 version=1, u8 dtype (0 = f64 real,
// 1 = c128 interleaved), u32 LE rows, u32 LE cols, row-major LE payload.
void write_cifg(const std::string& path, const RealGrid& g);
void write_cifg(const std::string& path, const ComplexGrid& g);
RealGrid read_cifg_real(const std::string& path);
ComplexGrid read_cifg_complex(const std::string& path);
// dtype of the file at `path` (0 real, 1 complex) without loading the payload.
int cifg_dtype(const std::string& path);

// 8-bit binary PGM export; values clamped to [0,1] then scaled by 255.
void write_pgm(const std::string& path, const RealGrid& g);

}  // namespace cifg
