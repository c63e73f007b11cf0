#include "cifg/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>

namespace cifg {

RealGrid::RealGrid(int r, int c, double fill) : rows(r), cols(c) {
  if (r < 1 || c < 1) throw std::invalid_argument("grid dimensions must be positive");
  data.assign(static_cast<size_t>(r) * c, fill);
}

ComplexGrid::ComplexGrid(int r, int c, cplx fill) : rows(r), cols(c) {
  if (r < 1 || c < 1) throw std::invalid_argument("grid dimensions must be positive");
  data.assign(static_cast<size_t>(r) * c, fill);
}

ComplexGrid to_complex(const RealGrid& g) {
  ComplexGrid out(g.rows, g.cols);
  for (size_t i = 0; i < g.data.size(); ++i) out.data[i] = cplx(g.data[i], 0.0);
  return out;
}

RealGrid real_part(const ComplexGrid& g) {
  RealGrid out(g.rows, g.cols);
  for (size_t i = 0; i < g.data.size(); ++i) out.data[i] = g.data[i].real();
  return out;
}

double max_abs_imag(const ComplexGrid& g) {
  double m = 0.0;
  for (const cplx& v : g.data) m = std::max(m, std::abs(v.imag()));
  return m;
}

bool all_finite(const RealGrid& g) {
  for (double v : g.data)
    if (!std::isfinite(v)) return false;
  return true;
}

bool all_finite(const ComplexGrid& g) {
  for (const cplx& v : g.data)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  return true;
}

ComplexGrid transpose(const ComplexGrid& g) {
  ComplexGrid out(g.cols, g.rows);
  for (int r = 0; r < g.rows; ++r)
    for (int c = 0; c < g.cols; ++c) out.at(c, r) = g.at(r, c);
  return out;
}

namespace {

constexpr char kMagic[4] = {'C', 'I', 'F', 'G'};

void put_u32le(std::ostream& os, uint32_t v) {
  unsigned char b[4] = {static_cast<unsigned char>(v & 0xff),
                        static_cast<unsigned char>((v >> 8) & 0xff),
                        static_cast<unsigned char>((v >> 16) & 0xff),
                        static_cast<unsigned char>((v >> 24) & 0xff)};
  os.write(reinterpret_cast<const char*>(b), 4);
}

uint32_t get_u32le(std::istream& is) {
  unsigned char b[4];
  is.read(reinterpret_cast<char*>(b), 4);
  return static_cast<uint32_t>(b[0]) | (static_cast<uint32_t>(b[1]) << 8) |
         (static_cast<uint32_t>(b[2]) << 16) | (static_cast<uint32_t>(b[3]) << 24);
}

void write_header(std::ostream& os, uint8_t dtype, uint32_t rows, uint32_t cols) {
  os.write(kMagic, 4);
  uint8_t version = 1;
  os.write(reinterpret_cast<const char*>(&version), 1);
  os.write(reinterpret_cast<const char*>(&dtype), 1);
  put_u32le(os, rows);
  put_u32le(os, cols);
}

struct CifgHeader {
  uint8_t dtype;
  uint32_t rows, cols;
};

CifgHeader read_header(std::istream& is, const std::string& path) {
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, kMagic, 4) != 0)
    throw std::runtime_error(path + ": not a CIFG file");
  uint8_t version = 0, dtype = 0;
  is.read(reinterpret_cast<char*>(&version), 1);
  is.read(reinterpret_cast<char*>(&dtype), 1);
  if (version != 1) throw std::runtime_error(path + ": unsupported CIFG version");
  if (dtype > 1) throw std::runtime_error(path + ": unknown CIFG dtype");
  CifgHeader h;
  h.dtype = dtype;
  h.rows = get_u32le(is);
  h.cols = get_u32le(is);
  if (!is || h.rows == 0 || h.cols == 0)
    throw std::runtime_error(path + ": corrupt CIFG header");
  return h;
}

static_assert(sizeof(double) == 8, "payload layout assumes 8-byte doubles");

}  // namespace

void write_cifg(const std::string& path, const RealGrid& g) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  write_header(os, 0, static_cast<uint32_t>(g.rows), static_cast<uint32_t>(g.cols));
  os.write(reinterpret_cast<const char*>(g.data.data()),
           static_cast<std::streamsize>(g.data.size() * sizeof(double)));
  if (!os) throw std::runtime_error("write failed: " + path);
}

void write_cifg(const std::string& path, const ComplexGrid& g) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  write_header(os, 1, static_cast<uint32_t>(g.rows), static_cast<uint32_t>(g.cols));
  os.write(reinterpret_cast<const char*>(g.data.data()),
           static_cast<std::streamsize>(g.data.size() * 2 * sizeof(double)));
  if (!os) throw std::runtime_error("write failed: " + path);
}

RealGrid read_cifg_real(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open: " + path);
  CifgHeader h = read_header(is, path);
  if (h.dtype != 0) throw std::runtime_error(path + ": expected real dtype");
  RealGrid g(static_cast<int>(h.rows), static_cast<int>(h.cols));
  is.read(reinterpret_cast<char*>(g.data.data()),
          static_cast<std::streamsize>(g.data.size() * sizeof(double)));
  if (!is) throw std::runtime_error(path + ": truncated payload");
  if (!all_finite(g)) throw std::runtime_error(path + ": non-finite samples");
  return g;
}

ComplexGrid read_cifg_complex(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open: " + path);
  CifgHeader h = read_header(is, path);
  if (h.dtype != 1) throw std::runtime_error(path + ": expected complex dtype");
  ComplexGrid g(static_cast<int>(h.rows), static_cast<int>(h.cols));
  is.read(reinterpret_cast<char*>(g.data.data()),
          static_cast<std::streamsize>(g.data.size() * 2 * sizeof(double)));
  if (!is) throw std::runtime_error(path + ": truncated payload");
  if (!all_finite(g)) throw std::runtime_error(path + ": non-finite samples");
  return g;
}

int cifg_dtype(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open: " + path);
  return read_header(is, path).dtype;
}

void write_pgm(const std::string& path, const RealGrid& g) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  os << "P5\n" << g.cols << " " << g.rows << "\n255\n";
  std::vector<unsigned char> row(static_cast<size_t>(g.cols));
  for (int r = 0; r < g.rows; ++r) {
    for (int c = 0; c < g.cols; ++c) {
      double v = std::clamp(g.at(r, c), 0.0, 1.0);
      row[static_cast<size_t>(c)] = static_cast<unsigned char>(std::lround(v * 255.0));
    }
    os.write(reinterpret_cast<const char*>(row.data()), g.cols);
  }
  if (!os) throw std::runtime_error("write failed: " + path);
}

}  // namespace cifg
