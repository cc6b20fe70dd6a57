#pragma once

#include <cstddef>
#include <initializer_list>

#include "lumplab/types.hpp"

namespace lumplab {

/// Dense rectangular matrix, row-major.
class Matrix {
public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}
  Matrix(std::size_t rows, std::size_t cols, Vec data);
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t n);

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const Vec& data() const { return data_; }

  Vec apply(const Vec& x) const;             ///< y = A x
  Vec apply_transposed(const Vec& x) const;  ///< y = A^T x
  Matrix transpose() const;
  Vec column(std::size_t j) const;
  void set_column(std::size_t j, const Vec& v);

  double frobenius_norm() const;
  Matrix& operator+=(const Matrix& other);
  Matrix& operator-=(const Matrix& other);
  Matrix& operator*=(double s);

private:
  std::size_t rows_ = 0, cols_ = 0;
  Vec data_;
};

Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator+(Matrix a, const Matrix& b);
Matrix operator-(Matrix a, const Matrix& b);
Matrix operator*(double s, Matrix a);

/// Dense symmetric matrix. Construction symmetrizes by averaging, mutation
/// writes both mirror entries, so entries[i][j] == entries[j][i] holds exactly.
class SymMatrix {
public:
  SymMatrix() = default;
  explicit SymMatrix(std::size_t n) : n_(n), data_(n * n, 0.0) {}
  SymMatrix(std::initializer_list<std::initializer_list<double>> rows);

  /// Symmetrize an arbitrary square matrix by averaging A and A^T.
  static SymMatrix from_general(const Matrix& a);
  static SymMatrix identity(std::size_t n);
  static SymMatrix diagonal(const Vec& d);

  double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }
  /// Writes entries (i,j) and (j,i).
  void set(std::size_t i, std::size_t j, double v) {
    data_[i * n_ + j] = v;
    data_[j * n_ + i] = v;
  }
  void add(std::size_t i, std::size_t j, double v) {
    data_[i * n_ + j] += v;
    if (i != j) data_[j * n_ + i] += v;
  }

  std::size_t dim() const { return n_; }
  Vec apply(const Vec& x) const;
  double frobenius_norm() const;
  double norm_inf() const;  ///< max row sum of absolute values
  Vec diagonal_values() const;
  Matrix dense() const;
  bool nonnegative() const;  ///< all entries >= 0

  SymMatrix restricted(const std::vector<std::size_t>& idx) const;  ///< principal submatrix

  SymMatrix& operator+=(const SymMatrix& other);
  SymMatrix& operator-=(const SymMatrix& other);
  SymMatrix& operator*=(double s);

private:
  std::size_t n_ = 0;
  Vec data_;
};

SymMatrix operator+(SymMatrix a, const SymMatrix& b);
SymMatrix operator-(SymMatrix a, const SymMatrix& b);
SymMatrix operator*(double s, SymMatrix a);

}  // namespace lumplab
