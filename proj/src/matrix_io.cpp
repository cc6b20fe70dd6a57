#include "lumplab/matrix_io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace lumplab {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_matrix_market(std::ostream& os, const SymMatrix& a) {
  const std::size_t n = a.dim();
  std::size_t nnz = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j)
      if (a(i, j) != 0.0) ++nnz;
  os << "%%MatrixMarket matrix coordinate real symmetric\n";
  os << n << " " << n << " " << nnz << "\n";
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j)
      if (a(i, j) != 0.0) os << i + 1 << " " << j + 1 << " " << format_double(a(i, j)) << "\n";
}

void write_matrix_market(std::ostream& os, const Matrix& a) {
  std::size_t nnz = 0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (a(i, j) != 0.0) ++nnz;
  os << "%%MatrixMarket matrix coordinate real general\n";
  os << a.rows() << " " << a.cols() << " " << nnz << "\n";
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (a(i, j) != 0.0) os << i + 1 << " " << j + 1 << " " << format_double(a(i, j)) << "\n";
}

void write_matrix_market_file(const std::string& path, const SymMatrix& a) {
  std::ostringstream ss;
  write_matrix_market(ss, a);
  write_file_atomic(path, ss.str());
}

namespace {

struct MmHeader {
  bool symmetric = false;
  std::size_t rows = 0, cols = 0, nnz = 0;
};

MmHeader read_mm_header(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw ConfigError("empty MatrixMarket stream");
  if (line.rfind("%%MatrixMarket", 0) != 0) throw ConfigError("missing MatrixMarket banner");
  MmHeader h;
  h.symmetric = line.find("symmetric") != std::string::npos;
  if (line.find("coordinate") == std::string::npos)
    throw ConfigError("only coordinate MatrixMarket files are supported");
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '%') continue;
    std::istringstream ls(line);
    if (!(ls >> h.rows >> h.cols >> h.nnz)) throw ConfigError("bad MatrixMarket size line");
    return h;
  }
  throw ConfigError("truncated MatrixMarket file");
}

}  // namespace

SymMatrix read_matrix_market_sym(std::istream& is) {
  MmHeader h = read_mm_header(is);
  if (h.rows != h.cols) throw ConfigError("expected a square MatrixMarket matrix");
  SymMatrix a(h.rows);
  std::size_t i, j;
  double v;
  for (std::size_t k = 0; k < h.nnz; ++k) {
    if (!(is >> i >> j >> v)) throw ConfigError("truncated MatrixMarket entries");
    a.set(i - 1, j - 1, v);  // symmetric flag honored: set mirrors
  }
  return a;
}

Matrix read_matrix_market(std::istream& is) {
  MmHeader h = read_mm_header(is);
  Matrix a(h.rows, h.cols);
  std::size_t i, j;
  double v;
  for (std::size_t k = 0; k < h.nnz; ++k) {
    if (!(is >> i >> j >> v)) throw ConfigError("truncated MatrixMarket entries");
    a(i - 1, j - 1) = v;
    if (h.symmetric && i != j) a(j - 1, i - 1) = v;
  }
  return a;
}

SymMatrix read_matrix_market_sym_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open " + path);
  return read_matrix_market_sym(f);
}

void write_dense_csv(std::ostream& os, const SymMatrix& a) {
  os << a.dim() << "\n";
  for (std::size_t i = 0; i < a.dim(); ++i) {
    for (std::size_t j = 0; j < a.dim(); ++j) {
      if (j) os << ",";
      os << format_double(a(i, j));
    }
    os << "\n";
  }
}

SymMatrix read_dense_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw ConfigError("empty dense CSV");
  const std::size_t n = std::stoul(line);
  SymMatrix a(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::getline(is, line)) throw ConfigError("truncated dense CSV");
    std::istringstream ls(line);
    std::string cell;
    for (std::size_t j = 0; j < n; ++j) {
      if (!std::getline(ls, cell, ',')) throw ConfigError("short dense CSV row");
      a.set(i, j, std::stod(cell));
    }
  }
  return a;
}

void write_band_csv(std::ostream& os, const BandedSPD& a) {
  for (std::size_t d = 0; d < a.bands().size(); ++d) {
    os << d;
    for (double v : a.bands()[d]) os << "," << format_double(v);
    os << "\n";
  }
}

void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw ConfigError("cannot write " + tmp.string());
    f << content;
  }
  fs::rename(tmp, target);
}

}  // namespace lumplab
