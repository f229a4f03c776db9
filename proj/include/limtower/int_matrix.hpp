#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <functional>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace limtower {

using Int = boost::multiprecision::cpp_int;

using IntVec = std::vector<Int>;

/// Dense matrix of arbitrary-precision integers, row-major.
/// 0xN and Nx0 shapes are legal; throughout the library the columns of a
/// matrix are the generators of a lattice and homs act on column vectors.
class IntMatrix {
public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols) {}
  IntMatrix(std::initializer_list<std::initializer_list<Int>> init);

  static IntMatrix identity(std::size_t n);
  static IntMatrix zero(std::size_t rows, std::size_t cols);
  /// Single column from a vector.
  static IntMatrix column(const IntVec& v);
  /// Diagonal matrix from the given entries.
  static IntMatrix diagonal(const IntVec& d);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty_shape() const { return rows_ == 0 || cols_ == 0; }

  Int& at(std::size_t i, std::size_t j) {
    check_index(i, j);
    return data_[i * cols_ + j];
  }
  const Int& at(std::size_t i, std::size_t j) const {
    check_index(i, j);
    return data_[i * cols_ + j];
  }
  Int& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Int& operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  bool operator==(const IntMatrix& o) const = default;

  IntMatrix operator+(const IntMatrix& o) const;
  IntMatrix operator-(const IntMatrix& o) const;
  IntMatrix operator-() const;
  IntMatrix operator*(const IntMatrix& o) const;
  IntVec operator*(const IntVec& v) const;
  IntMatrix operator*(const Int& c) const;

  IntMatrix transpose() const;

  bool is_zero() const;
  bool is_identity() const;
  bool is_square() const { return rows_ == cols_; }

  /// Column j as a vector.
  IntVec col(std::size_t j) const;
  IntVec row(std::size_t i) const;
  void set_col(std::size_t j, const IntVec& v);

  /// [A | B] side by side; row counts must agree.
  static IntMatrix hstack(const IntMatrix& a, const IntMatrix& b);
  /// A over B; column counts must agree.
  static IntMatrix vstack(const IntMatrix& a, const IntMatrix& b);
  /// Block diagonal.
  static IntMatrix block_diag(const IntMatrix& a, const IntMatrix& b);

  IntMatrix submatrix(std::size_t r0, std::size_t c0, std::size_t nr,
                      std::size_t nc) const;
  /// Columns [c0, c0+nc).
  IntMatrix col_range(std::size_t c0, std::size_t nc) const;

  void swap_rows(std::size_t i, std::size_t j);
  void swap_cols(std::size_t i, std::size_t j);
  /// row(i) += c * row(j)
  void add_row_multiple(std::size_t i, std::size_t j, const Int& c);
  /// col(i) += c * col(j)
  void add_col_multiple(std::size_t i, std::size_t j, const Int& c);
  void negate_row(std::size_t i);
  void negate_col(std::size_t j);

  /// Entrywise residues in [0, m) for m > 0.
  IntMatrix mod(const Int& m) const;

  /// Exact determinant (fraction-free Gauss-Bareiss); square only.
  Int det() const;

  std::string to_string() const;

private:
  void check_index(std::size_t i, std::size_t j) const {
    if (i >= rows_ || j >= cols_)
      throw std::out_of_range("IntMatrix index (" + std::to_string(i) + "," +
                              std::to_string(j) + ") out of " +
                              std::to_string(rows_) + "x" +
                              std::to_string(cols_));
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Int> data_;
};

IntVec operator+(const IntVec& a, const IntVec& b);
IntVec operator-(const IntVec& a, const IntVec& b);
IntVec operator*(const Int& c, const IntVec& v);
bool is_zero_vec(const IntVec& v);
IntVec mod_vec(const IntVec& v, const Int& m);
std::string to_string(const IntVec& v);

} // namespace limtower
