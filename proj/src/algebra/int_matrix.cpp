#include "orbitlab/algebra/int_matrix.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "orbitlab/algebra/errors.hpp"

namespace orbitlab::algebra {

namespace {

void require_square(const IntMatrix& a, const char* what) {
  if (!a.is_square()) throw ArityError(std::string(what) + " needs a square matrix");
}

}  // namespace

IntMatrix::IntMatrix(std::initializer_list<std::initializer_list<long>> rows)
    : rows_(rows.size()), cols_(rows.size() == 0 ? 0 : rows.begin()->size()) {
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw ArityError("ragged matrix literal");
    for (long v : r) data_.emplace_back(v);
  }
}

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::from_rows(const std::vector<std::vector<long>>& rows) {
  std::size_t cols = rows.empty() ? 0 : rows.front().size();
  IntMatrix m(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) throw ArityError("ragged matrix rows");
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

IntMatrix IntMatrix::transpose() const {
  IntMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Integer IntMatrix::trace() const {
  require_square(*this, "trace");
  Integer t = 0;
  for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
  return t;
}

Integer IntMatrix::determinant() const {
  require_square(*this, "determinant");
  const std::size_t n = rows_;
  if (n == 0) return 1;
  IntMatrix m = *this;
  Integer prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m(k, k) == 0) {
      std::size_t swap = k + 1;
      while (swap < n && m(swap, k) == 0) ++swap;
      if (swap == n) return 0;
      for (std::size_t j = 0; j < n; ++j) std::swap(m(k, j), m(swap, j));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        Integer v = m(i, j) * m(k, k) - m(i, k) * m(k, j);
        mpz_divexact(m(i, j).get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
      }
      m(i, k) = 0;
    }
    prev = m(k, k);
  }
  return sign * m(n - 1, n - 1);
}

std::size_t IntMatrix::max_bits() const {
  std::size_t b = 0;
  for (const Integer& v : data_) b = std::max(b, bit_size(v));
  return b;
}

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols_ != b.rows_) throw ArityError("matrix product shape mismatch");
  IntMatrix c(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i) {
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const Integer& aik = a(i, k);
      if (aik == 0) continue;
      for (std::size_t j = 0; j < b.cols_; ++j) mpz_addmul(c(i, j).get_mpz_t(), aik.get_mpz_t(), b(k, j).get_mpz_t());
    }
  }
  return c;
}

IntMatrix operator-(const IntMatrix& a, const IntMatrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw ArityError("matrix difference shape mismatch");
  IntMatrix c(a.rows_, a.cols_);
  for (std::size_t i = 0; i < a.data_.size(); ++i) c.data_[i] = a.data_[i] - b.data_[i];
  return c;
}

std::vector<Integer> IntMatrix::apply(std::span<const Integer> v) const {
  if (v.size() != cols_) throw ArityError("matrix-vector shape mismatch");
  std::vector<Integer> out(rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) mpz_addmul(out[i].get_mpz_t(), (*this)(i, j).get_mpz_t(), v[j].get_mpz_t());
  return out;
}

std::string IntMatrix::to_string() const {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < rows_; ++i) {
    os << (i ? ",[" : "[");
    for (std::size_t j = 0; j < cols_; ++j) os << (j ? "," : "") << (*this)(i, j).get_str();
    os << ']';
  }
  os << ']';
  return os.str();
}

IntMatrix matrix_power(const IntMatrix& a, unsigned long e) {
  require_square(a, "matrix_power");
  IntMatrix result = IntMatrix::identity(a.dim());
  IntMatrix base = a;
  while (e != 0) {
    if (e & 1UL) result = result * base;
    e >>= 1;
    if (e != 0) base = base * base;
  }
  return result;
}

std::vector<std::vector<std::size_t>> index_subsets(std::size_t n, std::size_t k) {
  std::vector<std::vector<std::size_t>> out;
  if (k > n) return out;
  std::vector<std::size_t> cur(k);
  for (std::size_t i = 0; i < k; ++i) cur[i] = i;
  for (;;) {
    out.push_back(cur);
    if (k == 0) break;
    std::size_t i = k;
    while (i > 0 && cur[i - 1] == n - k + (i - 1)) --i;
    if (i == 0) break;
    ++cur[i - 1];
    for (std::size_t j = i; j < k; ++j) cur[j] = cur[j - 1] + 1;
  }
  return out;
}

IntMatrix exterior_power(const IntMatrix& a, std::size_t k) {
  require_square(a, "exterior_power");
  const std::size_t n = a.dim();
  if (k > n) throw std::out_of_range("exterior power index " + std::to_string(k) + " exceeds dimension " + std::to_string(n));
  auto subsets = index_subsets(n, k);
  IntMatrix out(subsets.size());
  IntMatrix minor(k);
  for (std::size_t r = 0; r < subsets.size(); ++r) {
    for (std::size_t c = 0; c < subsets.size(); ++c) {
      for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) minor(i, j) = a(subsets[r][i], subsets[c][j]);
      out(r, c) = minor.determinant();
    }
  }
  return out;
}

IntMatrix symmetric_square(const IntMatrix& a) {
  require_square(a, "symmetric_square");
  const std::size_t n = a.dim();
  std::vector<std::pair<std::size_t, std::size_t>> basis;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) basis.emplace_back(i, j);
  IntMatrix s(basis.size());
  for (std::size_t col = 0; col < basis.size(); ++col) {
    auto [j, l] = basis[col];
    for (std::size_t row = 0; row < basis.size(); ++row) {
      auto [i, k] = basis[row];
      // Coefficient of e_i e_k in (A e_j)(A e_l).
      Integer v = a(i, j) * a(k, l);
      if (i != k) v += a(k, j) * a(i, l);
      s(row, col) = v;
    }
  }
  return s;
}

std::vector<Integer> characteristic_polynomial(const IntMatrix& a) {
  require_square(a, "characteristic_polynomial");
  // Faddeev-LeVerrier; every division below is exact over Z.
  const std::size_t n = a.dim();
  std::vector<Integer> c(n + 1);
  c[n] = 1;
  IntMatrix m(n);
  for (std::size_t k = 1; k <= n; ++k) {
    IntMatrix next = a * m;
    for (std::size_t i = 0; i < n; ++i) next(i, i) += c[n - k + 1];
    m = std::move(next);
    Integer t = (a * m).trace();
    Integer q;
    mpz_divexact_ui(q.get_mpz_t(), t.get_mpz_t(), k);
    c[n - k] = -q;
  }
  return c;
}

namespace {

// Hermite-style row reduction of an integer row basis: pivots positive,
// entries above pivots reduced into [0, pivot).
std::vector<std::vector<Integer>> hermite_rows(std::vector<std::vector<Integer>> rows, std::size_t cols) {
  std::size_t pivot_row = 0;
  for (std::size_t c = 0; c < cols && pivot_row < rows.size(); ++c) {
    for (std::size_t r = pivot_row + 1; r < rows.size(); ++r) {
      while (rows[r][c] != 0) {
        Integer q;
        mpz_fdiv_q(q.get_mpz_t(), rows[pivot_row][c].get_mpz_t(), rows[r][c].get_mpz_t());
        for (std::size_t j = 0; j < cols; ++j) rows[pivot_row][j] -= q * rows[r][j];
        std::swap(rows[pivot_row], rows[r]);
      }
    }
    if (rows[pivot_row][c] == 0) continue;
    if (rows[pivot_row][c] < 0)
      for (auto& v : rows[pivot_row]) v = -v;
    for (std::size_t r = 0; r < pivot_row; ++r) {
      Integer q;
      mpz_fdiv_q(q.get_mpz_t(), rows[r][c].get_mpz_t(), rows[pivot_row][c].get_mpz_t());
      for (std::size_t j = 0; j < cols; ++j) rows[r][j] -= q * rows[pivot_row][j];
    }
    ++pivot_row;
  }
  rows.resize(pivot_row);
  return rows;
}

}  // namespace

std::vector<std::vector<Integer>> integer_kernel(const IntMatrix& a) {
  const std::size_t r = a.rows();
  const std::size_t c = a.cols();
  IntMatrix m = a;
  IntMatrix u = IntMatrix::identity(c);
  auto column_op = [&](IntMatrix& x, std::size_t p, std::size_t q, const Integer& s, const Integer& t,
                       const Integer& uu, const Integer& vv) {
    // col p <- s*col p + t*col q ; col q <- uu*col p + vv*col q (old values)
    for (std::size_t i = 0; i < x.rows(); ++i) {
      Integer xp = x(i, p);
      Integer xq = x(i, q);
      x(i, p) = s * xp + t * xq;
      x(i, q) = uu * xp + vv * xq;
    }
  };
  std::size_t pivot = 0;
  for (std::size_t i = 0; i < r && pivot < c; ++i) {
    for (std::size_t j = pivot + 1; j < c; ++j) {
      if (m(i, j) == 0) continue;
      Integer x = m(i, pivot);
      Integer y = m(i, j);
      Integer g, s, t;
      mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
      Integer uu = -y / g;
      Integer vv = x / g;
      column_op(m, pivot, j, s, t, uu, vv);
      column_op(u, pivot, j, s, t, uu, vv);
    }
    if (m(i, pivot) != 0) ++pivot;
  }
  std::vector<std::vector<Integer>> basis;
  for (std::size_t j = pivot; j < c; ++j) {
    std::vector<Integer> v(c);
    for (std::size_t i = 0; i < c; ++i) v[i] = u(i, j);
    basis.push_back(std::move(v));
  }
  return hermite_rows(std::move(basis), c);
}

std::size_t rank(const IntMatrix& a) {
  IntMatrix m = a;
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  Integer prev = 1;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && m(p, c) == 0) ++p;
    if (p == rows) continue;
    if (p != r)
      for (std::size_t j = 0; j < cols; ++j) std::swap(m(p, j), m(r, j));
    for (std::size_t i = r + 1; i < rows; ++i) {
      for (std::size_t j = c + 1; j < cols; ++j) {
        Integer v = m(i, j) * m(r, c) - m(i, c) * m(r, j);
        mpz_divexact(m(i, j).get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
      }
      m(i, c) = 0;
    }
    prev = m(r, c);
    ++r;
  }
  return r;
}

}  // namespace orbitlab::algebra
