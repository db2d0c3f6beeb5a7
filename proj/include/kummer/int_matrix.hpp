#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace kummer {

using Integer = mpz_class;
using IntVector = std::vector<Integer>;

// Exact integer matrix, row-major.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols);
  IntMatrix(std::size_t rows, std::size_t cols, std::vector<Integer> data);
  IntMatrix(std::initializer_list<std::initializer_list<long>> rows);

  static IntMatrix identity(std::size_t n);
  static IntMatrix zero(std::size_t rows, std::size_t cols) { return {rows, cols}; }
  static IntMatrix diagonal(std::span<const Integer> entries);
  static IntMatrix scalar(std::size_t n, const Integer& c);
  static IntMatrix from_columns(std::size_t rows, const std::vector<IntVector>& cols);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  Integer& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Integer& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  const std::vector<Integer>& data() const { return data_; }

  IntVector column(std::size_t j) const;
  IntVector row(std::size_t i) const;
  void set_column(std::size_t j, std::span<const Integer> v);

  IntMatrix transpose() const;
  // Rows [r0, r1) and columns [c0, c1).
  IntMatrix block(std::size_t r0, std::size_t r1, std::size_t c0, std::size_t c1) const;
  IntMatrix select_rows(std::span<const std::size_t> idx) const;
  IntMatrix select_columns(std::span<const std::size_t> idx) const;

  bool is_zero() const;
  bool is_diagonal() const;

  // Elementary operations used by the normal form routines.
  void swap_rows(std::size_t a, std::size_t b);
  void swap_cols(std::size_t a, std::size_t b);
  // row[dst] += c * row[src]
  void add_row_multiple(std::size_t dst, std::size_t src, const Integer& c);
  // col[dst] += c * col[src]
  void add_col_multiple(std::size_t dst, std::size_t src, const Integer& c);
  void negate_row(std::size_t i);
  void negate_col(std::size_t j);

  friend bool operator==(const IntMatrix& a, const IntMatrix& b);
  friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);
  friend IntMatrix operator+(const IntMatrix& a, const IntMatrix& b);
  friend IntMatrix operator-(const IntMatrix& a, const IntMatrix& b);
  friend IntMatrix operator*(const Integer& c, const IntMatrix& a);
  friend IntVector operator*(const IntMatrix& a, std::span<const Integer> v);

  std::string to_string() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Integer> data_;
};

IntMatrix hconcat(const IntMatrix& a, const IntMatrix& b);
IntMatrix vconcat(const IntMatrix& a, const IntMatrix& b);
IntMatrix block_diagonal(const IntMatrix& a, const IntMatrix& b);
// Kronecker product a ⊗ b.
IntMatrix kronecker(const IntMatrix& a, const IntMatrix& b);

IntVector unit_vector(std::size_t n, std::size_t i);
IntVector add(std::span<const Integer> a, std::span<const Integer> b);
IntVector sub(std::span<const Integer> a, std::span<const Integer> b);
IntVector scale(const Integer& c, std::span<const Integer> a);
bool is_zero(std::span<const Integer> v);

// Integer helpers.
Integer gcd(const Integer& a, const Integer& b);
Integer lcm(const Integer& a, const Integer& b);
// Floor division and nonnegative remainder for positive m.
Integer floor_div(const Integer& a, const Integer& m);
Integer mod(const Integer& a, const Integer& m);
// p-adic valuation of a nonzero integer.
unsigned valuation(const Integer& a, const Integer& p);
Integer power(const Integer& base, unsigned exp);
bool is_prime(const Integer& p);
// Prime factorisation, ascending primes with multiplicities.
std::vector<std::pair<Integer, unsigned>> factorize(const Integer& n);
std::vector<Integer> divisors(const Integer& n);
// Inverse of a modulo m; requires gcd(a, m) = 1.
Integer inverse_mod(const Integer& a, const Integer& m);

}  // namespace kummer
