#ifndef ORBITLAB_ALGEBRA_INT_MATRIX_HPP
#define ORBITLAB_ALGEBRA_INT_MATRIX_HPP

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "orbitlab/algebra/integer.hpp"

namespace orbitlab::algebra {

// Dense matrix over Z, row-major. Most operations require a square matrix;
// rectangular shapes exist for kernels and evaluation matrices.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  explicit IntMatrix(std::size_t n) : IntMatrix(n, n) {}
  IntMatrix(std::initializer_list<std::initializer_list<long>> rows);

  static IntMatrix identity(std::size_t n);
  static IntMatrix from_rows(const std::vector<std::vector<long>>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }
  // Side length of a square matrix.
  std::size_t dim() const { return rows_; }

  Integer& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Integer& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  IntMatrix transpose() const;
  Integer trace() const;
  // Fraction-free (Bareiss) elimination.
  Integer determinant() const;
  // Largest bit size of any entry.
  std::size_t max_bits() const;

  friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);
  friend IntMatrix operator-(const IntMatrix& a, const IntMatrix& b);
  friend bool operator==(const IntMatrix& a, const IntMatrix& b) = default;

  std::vector<Integer> apply(std::span<const Integer> v) const;

  std::string to_string() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Integer> data_;
};

IntMatrix matrix_power(const IntMatrix& a, unsigned long e);

// Size-k subsets of {0..n-1} in lexicographic order.
std::vector<std::vector<std::size_t>> index_subsets(std::size_t n, std::size_t k);

// k-th exterior power: rows and columns indexed by index_subsets(n, k),
// entries are the k x k minors. Throws std::out_of_range for k > n.
IntMatrix exterior_power(const IntMatrix& a, std::size_t k);

// Symmetric square on the monomial basis e_i e_j (i <= j); its eigenvalues
// are the products lambda_i * lambda_j for i <= j.
IntMatrix symmetric_square(const IntMatrix& a);

// Characteristic polynomial det(tI - A), coefficients from t^0 up to t^n.
std::vector<Integer> characteristic_polynomial(const IntMatrix& a);

// Z-basis of {v in Z^cols : A v = 0}, via unimodular column reduction.
std::vector<std::vector<Integer>> integer_kernel(const IntMatrix& a);

// Rank over Q. Fraction-free elimination.
std::size_t rank(const IntMatrix& a);

}  // namespace orbitlab::algebra

#endif
