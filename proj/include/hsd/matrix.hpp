#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "hsd/field.hpp"

namespace hsd {

/// Dense vector over F_{p^d}, stored as element codes.
class Vector {
 public:
  Vector() = default;
  Vector(const Field& field, std::size_t n) : field_(&field), data_(n, 0) {}
  static Vector unit(const Field& field, std::size_t n, std::size_t i);

  const Field& field() const noexcept { return *field_; }
  std::size_t size() const noexcept { return data_.size(); }
  Fq at(std::size_t i) const { return {*field_, data_.at(i)}; }
  void set(std::size_t i, Fq c) { data_.at(i) = c.code(); }
  std::uint32_t code(std::size_t i) const noexcept { return data_[i]; }
  std::uint32_t& code(std::size_t i) noexcept { return data_[i]; }
  const std::vector<std::uint32_t>& codes() const noexcept { return data_; }
  bool is_zero() const noexcept;
  /// Index of the first nonzero entry, or size().
  std::size_t leading_index() const noexcept;

  Vector& operator+=(const Vector& o);
  Vector& operator-=(const Vector& o);
  friend Vector operator+(Vector a, const Vector& b) { return a += b; }
  friend Vector operator-(Vector a, const Vector& b) { return a -= b; }
  friend Vector operator*(Vector a, Fq c);
  friend Vector operator*(Fq c, Vector a) { return std::move(a) * c; }
  Vector operator-() const;
  /// this += c * o
  void axpy(Fq c, const Vector& o);
  friend bool operator==(const Vector& a, const Vector& b) noexcept {
    return a.field_ == b.field_ && a.data_ == b.data_;
  }
  friend bool operator!=(const Vector& a, const Vector& b) noexcept { return !(a == b); }
  friend bool operator<(const Vector& a, const Vector& b) noexcept { return a.data_ < b.data_; }

 private:
  const Field* field_ = nullptr;
  std::vector<std::uint32_t> data_;
};

/// Dense row-major matrix over F_{p^d}.
class Matrix {
 public:
  Matrix() = default;
  Matrix(const Field& field, std::size_t rows, std::size_t cols)
      : field_(&field), rows_(rows), cols_(cols), data_(rows * cols, 0) {}
  static Matrix identity(const Field& field, std::size_t n);
  static Matrix from_columns(const Field& field, std::size_t rows, const std::vector<Vector>& cols);
  static Matrix from_rows(const Field& field, std::size_t cols, const std::vector<Vector>& rows);
  /// Rows of all blocks stacked; blocks must share the column count.
  static Matrix vstack(const std::vector<const Matrix*>& blocks);

  const Field& field() const noexcept { return *field_; }
  bool has_field() const noexcept { return field_ != nullptr; }
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  Fq at(std::size_t r, std::size_t c) const { return {*field_, data_[r * cols_ + c]}; }
  void set(std::size_t r, std::size_t c, Fq v) { data_[r * cols_ + c] = v.code(); }
  std::uint32_t code(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }
  std::uint32_t& code(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
  const std::uint32_t* row_data(std::size_t r) const noexcept { return data_.data() + r * cols_; }
  std::uint32_t* row_data(std::size_t r) noexcept { return data_.data() + r * cols_; }

  Vector row(std::size_t r) const;
  Vector column(std::size_t c) const;
  bool is_zero() const noexcept;
  Matrix transpose() const;

  Matrix& operator+=(const Matrix& o);
  Matrix& operator-=(const Matrix& o);
  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(const Matrix& a, const Matrix& b);
  friend Vector operator*(const Matrix& a, const Vector& v);
  friend Matrix operator*(Matrix a, Fq c);
  friend Matrix operator*(Fq c, Matrix a) { return std::move(a) * c; }
  /// this += c * o
  void axpy(Fq c, const Matrix& o);
  Matrix pow(std::uint64_t n) const;

  friend bool operator==(const Matrix& a, const Matrix& b) noexcept {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.field_ == b.field_ && a.data_ == b.data_;
  }
  friend bool operator!=(const Matrix& a, const Matrix& b) noexcept { return !(a == b); }

 private:
  const Field* field_ = nullptr;
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<std::uint32_t> data_;
};

struct Echelon {
  Matrix rref;                      // reduced row echelon form, zero rows removed
  std::vector<std::size_t> pivots;  // pivot column of each row
  std::size_t rank() const noexcept { return pivots.size(); }
};

Echelon row_reduce(Matrix m);
std::size_t rank(const Matrix& m);
/// Basis of {x : m x = 0}: one vector per free column, with a 1 there and 0 at
/// the other free columns.
std::vector<Vector> kernel_basis(const Matrix& m);
/// Solution of a x = b with all free variables zero, or nullopt.
std::optional<Vector> solve(const Matrix& a, const Vector& b);
std::optional<Matrix> inverse(const Matrix& m);

}  // namespace hsd
