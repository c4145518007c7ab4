#pragma once

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <string>
#include <vector>

#include "plsys/field.hpp"

namespace plsys {

using Vector = std::vector<Scalar>;

/// Dense row-major matrix of exact scalars. Zero-sized shapes are legal and
/// common (maps into or out of a zero space).
class Matrix {
 public:
  Matrix() = default;
  Matrix(Field field, std::size_t rows, std::size_t cols);

  static Matrix zero(Field field, std::size_t rows, std::size_t cols) { return Matrix(field, rows, cols); }
  static Matrix identity(Field field, std::size_t n);
  static Matrix from_ints(Field field, std::initializer_list<std::initializer_list<long>> rows);
  static Matrix from_rows(Field field, std::size_t cols, const std::vector<Vector>& rows);
  static Matrix from_columns(Field field, std::size_t rows, const std::vector<Vector>& cols);

  Field field() const { return field_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Scalar& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Scalar& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  Vector row(std::size_t i) const;
  Vector column(std::size_t j) const;
  Vector apply(const Vector& v) const;

  Matrix transpose() const;
  Matrix stack_below(const Matrix& other) const;
  Matrix concat_right(const Matrix& other) const;
  Matrix select_columns(const std::vector<std::size_t>& which) const;

  bool is_zero() const;
  bool is_identity() const;
  std::size_t rank() const;
  /// Square matrices only.
  Scalar determinant() const;
  Scalar trace() const;
  std::optional<Matrix> inverse() const;

  std::string to_string() const;

  friend Matrix operator*(const Matrix& a, const Matrix& b);
  friend Matrix operator+(const Matrix& a, const Matrix& b);
  friend Matrix operator-(const Matrix& a, const Matrix& b);
  friend bool operator==(const Matrix& a, const Matrix& b);

 private:
  Field field_;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Scalar> data_;
};

struct Rref {
  Matrix reduced;
  std::vector<std::size_t> pivots;
};

Rref rref(const Matrix& m);

/// Some X with A X = B, or nothing when the system is inconsistent.
std::optional<Matrix> solve(const Matrix& a, const Matrix& b);

}  // namespace plsys
