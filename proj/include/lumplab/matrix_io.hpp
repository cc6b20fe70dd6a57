#pragma once

#include <iosfwd>
#include <string>

#include "lumplab/banded.hpp"
#include "lumplab/matrix.hpp"

namespace lumplab {

/// MatrixMarket coordinate format. Symmetric matrices are written with the
/// `symmetric` qualifier (lower triangle only); values use 17 significant
/// digits so text round-trips are bit-exact.
void write_matrix_market(std::ostream& os, const SymMatrix& a);
void write_matrix_market(std::ostream& os, const Matrix& a);
void write_matrix_market_file(const std::string& path, const SymMatrix& a);

SymMatrix read_matrix_market_sym(std::istream& is);
Matrix read_matrix_market(std::istream& is);
SymMatrix read_matrix_market_sym_file(const std::string& path);

/// Dense CSV: header row with n, then n rows of n comma-separated values.
void write_dense_csv(std::ostream& os, const SymMatrix& a);
SymMatrix read_dense_csv(std::istream& is);

/// Packed-band CSV for banded operators: one row per offset, `offset,v0,v1,...`.
void write_band_csv(std::ostream& os, const BandedSPD& a);

/// 17-significant-digit formatting used by every exporter.
std::string format_double(double v);

/// Atomically writes `content` to `path` (temp file + rename).
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace lumplab
