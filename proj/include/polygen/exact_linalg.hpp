// Exact integer and rational linear algebra.
//
// Scalars are GMP integers and rationals. Rationals are kept canonical
// (reduced, positive denominator) so equality is structural. Nothing in this
// header touches floating point.

#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace polygen {

using Int = mpz_class;
using Rat = mpq_class;
using IntVec = std::vector<Int>;
using RatVec = std::vector<Rat>;

/// Dense row-major matrix.
template <typename T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, T(0)) {}

  Matrix(std::initializer_list<std::initializer_list<long>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
      if (r.size() != cols_) throw std::invalid_argument("Matrix: ragged initializer");
      for (long v : r) data_.emplace_back(v);
    }
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  static Matrix from_rows(const std::vector<std::vector<T>>& rows) {
    Matrix m;
    m.rows_ = rows.size();
    m.cols_ = rows.empty() ? 0 : rows.front().size();
    m.data_.reserve(m.rows_ * m.cols_);
    for (const auto& r : rows) {
      if (r.size() != m.cols_) throw std::invalid_argument("Matrix: ragged rows");
      m.data_.insert(m.data_.end(), r.begin(), r.end());
    }
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<T> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const T> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
  std::vector<T> row_vector(std::size_t i) const { return {row(i).begin(), row(i).end()}; }
  std::vector<T> col_vector(std::size_t j) const {
    std::vector<T> c;
    c.reserve(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c.push_back((*this)(i, j));
    return c;
  }

  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
  }

  void append_row(std::span<const T> r) {
    if (rows_ == 0 && cols_ == 0) cols_ = r.size();
    if (r.size() != cols_) throw std::invalid_argument("Matrix: appended row has wrong length");
    data_.insert(data_.end(), r.begin(), r.end());
    ++rows_;
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  bool operator==(const Matrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using IntMat = Matrix<Int>;
using RatMat = Matrix<Rat>;

IntMat operator*(const IntMat& a, const IntMat& b);
RatMat operator*(const RatMat& a, const RatMat& b);
IntVec operator*(const IntMat& a, std::span<const Int> x);
RatVec operator*(const RatMat& a, std::span<const Rat> x);

RatMat to_rat(const IntMat& m);
RatVec to_rat(std::span<const Int> v);

Int dot(std::span<const Int> a, std::span<const Int> b);
Rat dot(std::span<const Int> a, std::span<const Rat> b);

/// Canonical rational n/d; throws on d == 0.
Rat make_rat(const Int& num, const Int& den);

Int gcd_of(std::span<const Int> v);

/// Exact determinant by fraction-free (Bareiss) elimination.
/// Throws std::invalid_argument for non-square input.
Int det(const IntMat& m);
Rat det(const RatMat& m);

std::size_t rank(const RatMat& m);
std::size_t rank(const IntMat& m);

struct HnfResult {
  IntMat h;  ///< row-style Hermite normal form
  IntMat u;  ///< unimodular transform with u * m == h
};

/// Row-style Hermite normal form: pivots positive, entries above a pivot lie
/// in [0, pivot), zero rows last. H is unique for a given input.
HnfResult hnf(const IntMat& m);

/// Solves a x = b exactly; std::nullopt when a is singular.
std::optional<RatVec> solve(const RatMat& a, std::span<const Rat> b);

std::optional<RatMat> inverse(const RatMat& a);

/// Integer vector parallel to v with the same orientation and content 1.
/// Throws std::invalid_argument on the zero vector.
IntVec primitive(std::span<const Rat> v);
IntVec primitive(std::span<const Int> v);

/// Divides v in place by the gcd of its entries (no-op on zero vectors).
void make_primitive_in_place(IntVec& v);

bool is_integral(std::span<const Rat> v);
IntVec to_int(std::span<const Rat> v);  ///< throws if any entry is not integral

std::string to_string(std::span<const Int> v);

}  // namespace polygen
