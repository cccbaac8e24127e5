#pragma once

// Exact dense linear algebra over a prime field F_p.
//
// Vectors are columns. A "subspace" is passed around as a matrix whose
// columns form a basis of it; the empty subspace of F_p^n is an n x 0 matrix.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace qrep {

using Scalar = std::uint32_t;

class Fp {
 public:
  constexpr Fp() = default;
  explicit Fp(Scalar p) : p_(p) {
    if (!is_prime(p)) throw std::invalid_argument("field characteristic " + std::to_string(p) + " is not prime");
    if (p >= (1u << 16)) throw std::invalid_argument("field characteristic too large (must be < 65536)");
  }

  Scalar p() const { return p_; }

  Scalar reduce(std::int64_t v) const {
    auto r = v % static_cast<std::int64_t>(p_);
    return static_cast<Scalar>(r < 0 ? r + p_ : r);
  }
  Scalar add(Scalar a, Scalar b) const { return (a + b) % p_; }
  Scalar sub(Scalar a, Scalar b) const { return (a + p_ - b) % p_; }
  Scalar mul(Scalar a, Scalar b) const { return static_cast<Scalar>((std::uint64_t{a} * b) % p_); }
  Scalar neg(Scalar a) const { return a == 0 ? 0 : p_ - a; }
  Scalar inv(Scalar a) const {
    if (a == 0) throw std::domain_error("inverse of zero in F_p");
    // Fermat: a^(p-2)
    Scalar result = 1, base = a;
    for (Scalar e = p_ - 2; e > 0; e >>= 1) {
      if (e & 1u) result = mul(result, base);
      base = mul(base, base);
    }
    return result;
  }

  friend bool operator==(const Fp&, const Fp&) = default;

  static bool is_prime(Scalar n) {
    if (n < 2) return false;
    for (Scalar d = 2; d * d <= n; ++d)
      if (n % d == 0) return false;
    return true;
  }

 private:
  Scalar p_ = 2;
};

class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, Fp field)
      : rows_(rows), cols_(cols), field_(field), data_(rows * cols, 0) {}

  static Matrix zero(std::size_t rows, std::size_t cols, Fp field) { return Matrix(rows, cols, field); }
  static Matrix identity(std::size_t n, Fp field) {
    Matrix m(n, n, field);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }
  // Entries are reduced mod p, so negative literals are accepted.
  static Matrix from_rows(Fp field, std::initializer_list<std::initializer_list<std::int64_t>> rows) {
    std::vector<std::vector<std::int64_t>> tmp;
    for (auto& r : rows) tmp.emplace_back(r);
    return from_rows(field, tmp);
  }
  static Matrix from_rows(Fp field, const std::vector<std::vector<std::int64_t>>& rows) {
    const std::size_t r = rows.size();
    const std::size_t c = r == 0 ? 0 : rows.front().size();
    Matrix m(r, c, field);
    for (std::size_t i = 0; i < r; ++i) {
      if (rows[i].size() != c) throw std::invalid_argument("ragged matrix literal");
      for (std::size_t j = 0; j < c; ++j) m(i, j) = field.reduce(rows[i][j]);
    }
    return m;
  }
  static Matrix column(Fp field, const std::vector<Scalar>& v) {
    Matrix m(v.size(), 1, field);
    for (std::size_t i = 0; i < v.size(); ++i) m(i, 0) = v[i] % field.p();
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const Fp& field() const { return field_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  Scalar& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  Scalar operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  const std::vector<Scalar>& data() const { return data_; }

  std::vector<Scalar> col(std::size_t j) const {
    std::vector<Scalar> v(rows_);
    for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
    return v;
  }
  Matrix col_matrix(std::size_t j) const { return cols_range(j, j + 1); }
  Matrix cols_range(std::size_t begin, std::size_t end) const {
    Matrix m(rows_, end - begin, field_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = begin; j < end; ++j) m(i, j - begin) = (*this)(i, j);
    return m;
  }
  Matrix rows_range(std::size_t begin, std::size_t end) const {
    Matrix m(end - begin, cols_, field_);
    for (std::size_t i = begin; i < end; ++i)
      for (std::size_t j = 0; j < cols_; ++j) m(i - begin, j) = (*this)(i, j);
    return m;
  }
  Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    Matrix m(nr, nc, field_);
    for (std::size_t i = 0; i < nr; ++i)
      for (std::size_t j = 0; j < nc; ++j) m(i, j) = (*this)(r0 + i, c0 + j);
    return m;
  }
  void set_block(std::size_t r0, std::size_t c0, const Matrix& b) {
    for (std::size_t i = 0; i < b.rows(); ++i)
      for (std::size_t j = 0; j < b.cols(); ++j) (*this)(r0 + i, c0 + j) = b(i, j);
  }
  Matrix select_cols(const std::vector<std::size_t>& idx) const {
    Matrix m(rows_, idx.size(), field_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < idx.size(); ++j) m(i, j) = (*this)(i, idx[j]);
    return m;
  }
  Matrix select_rows(const std::vector<std::size_t>& idx) const {
    Matrix m(idx.size(), cols_, field_);
    for (std::size_t i = 0; i < idx.size(); ++i)
      for (std::size_t j = 0; j < cols_; ++j) m(i, j) = (*this)(idx[i], j);
    return m;
  }

  bool is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](Scalar s) { return s == 0; });
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_, field_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  Matrix operator*(const Matrix& o) const {
    if (cols_ != o.rows_) throw std::invalid_argument("matrix product dimension mismatch");
    Matrix r(rows_, o.cols_, field_);
    const Scalar p = field_.p();
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t k = 0; k < cols_; ++k) {
        const Scalar a = (*this)(i, k);
        if (a == 0) continue;
        for (std::size_t j = 0; j < o.cols_; ++j) {
          const Scalar b = o(k, j);
          if (b != 0) r(i, j) = static_cast<Scalar>((r(i, j) + std::uint64_t{a} * b) % p);
        }
      }
    }
    return r;
  }
  Matrix operator+(const Matrix& o) const {
    check_same_shape(o);
    Matrix r = *this;
    for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] = field_.add(data_[i], o.data_[i]);
    return r;
  }
  Matrix operator-(const Matrix& o) const {
    check_same_shape(o);
    Matrix r = *this;
    for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] = field_.sub(data_[i], o.data_[i]);
    return r;
  }
  Matrix scaled(Scalar s) const {
    Matrix r = *this;
    for (auto& x : r.data_) x = field_.mul(x, s);
    return r;
  }
  // this += s * o
  void axpy(Scalar s, const Matrix& o) {
    check_same_shape(o);
    if (s == 0) return;
    for (std::size_t i = 0; i < data_.size(); ++i)
      if (o.data_[i] != 0) data_[i] = field_.add(data_[i], field_.mul(s, o.data_[i]));
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  void check_same_shape(const Matrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("matrix shape mismatch");
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  Fp field_{};
  std::vector<Scalar> data_;
};

inline Matrix hstack(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) throw std::invalid_argument("hstack row mismatch");
  Matrix m(a.rows(), a.cols() + b.cols(), a.field());
  m.set_block(0, 0, a);
  m.set_block(0, a.cols(), b);
  return m;
}

inline Matrix vstack(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.cols()) throw std::invalid_argument("vstack column mismatch");
  Matrix m(a.rows() + b.rows(), a.cols(), a.field());
  m.set_block(0, 0, a);
  m.set_block(a.rows(), 0, b);
  return m;
}

inline Matrix block_diagonal(const Matrix& a, const Matrix& b) {
  Matrix m(a.rows() + b.rows(), a.cols() + b.cols(), a.field());
  m.set_block(0, 0, a);
  m.set_block(a.rows(), a.cols(), b);
  return m;
}

inline Matrix kronecker_product(const Matrix& a, const Matrix& b) {
  Matrix m(a.rows() * b.rows(), a.cols() * b.cols(), a.field());
  const Fp& f = a.field();
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const Scalar s = a(i, j);
      if (s == 0) continue;
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l) m(i * b.rows() + k, j * b.cols() + l) = f.mul(s, b(k, l));
    }
  return m;
}

struct RrefResult {
  Matrix reduced;
  std::vector<std::size_t> pivots;
  std::size_t rank() const { return pivots.size(); }
};

// Gauss-Jordan with first-nonzero pivoting; deterministic.
inline RrefResult rref(Matrix m) {
  const Fp f = m.field();
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t c = 0; c < m.cols() && row < m.rows(); ++c) {
    std::size_t sel = row;
    while (sel < m.rows() && m(sel, c) == 0) ++sel;
    if (sel == m.rows()) continue;
    if (sel != row)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(sel, j), m(row, j));
    const Scalar inv = f.inv(m(row, c));
    for (std::size_t j = c; j < m.cols(); ++j) m(row, j) = f.mul(m(row, j), inv);
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == row || m(i, c) == 0) continue;
      const Scalar factor = m(i, c);
      for (std::size_t j = c; j < m.cols(); ++j)
        if (m(row, j) != 0) m(i, j) = f.sub(m(i, j), f.mul(factor, m(row, j)));
    }
    pivots.push_back(c);
    ++row;
  }
  return {std::move(m), std::move(pivots)};
}

inline std::size_t rank(const Matrix& m) { return rref(m).rank(); }

// Basis of the right null space, one column per free variable.
inline Matrix kernel_basis(const Matrix& m) {
  const Fp f = m.field();
  auto [r, pivots] = rref(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto c : pivots) is_pivot[c] = true;
  std::vector<std::size_t> free;
  for (std::size_t c = 0; c < m.cols(); ++c)
    if (!is_pivot[c]) free.push_back(c);
  Matrix k(m.cols(), free.size(), f);
  for (std::size_t j = 0; j < free.size(); ++j) {
    k(free[j], j) = 1;
    for (std::size_t i = 0; i < pivots.size(); ++i) k(pivots[i], j) = f.neg(r(i, free[j]));
  }
  return k;
}

// Linearly independent columns spanning the column space (a subset of m's columns).
inline Matrix image_basis(const Matrix& m) { return m.select_cols(rref(m).pivots); }

// Some x with a * x == b, or nullopt when b is not in the column space of a.
inline std::optional<Matrix> solve(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) throw std::invalid_argument("solve: a.rows != b.rows");
  const Fp f = a.field();
  auto [r, pivots] = rref(hstack(a, b));
  for (auto c : pivots)
    if (c >= a.cols()) return std::nullopt;
  Matrix x(a.cols(), b.cols(), f);
  for (std::size_t i = 0; i < pivots.size(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) x(pivots[i], j) = r(i, a.cols() + j);
  return x;
}

inline bool in_span(const Matrix& basis, const Matrix& v) {
  if (basis.cols() == 0) return v.is_zero();
  return solve(basis, v).has_value();
}

inline std::optional<Matrix> inverse(const Matrix& m) {
  if (m.rows() != m.cols()) return std::nullopt;
  auto x = solve(m, Matrix::identity(m.rows(), m.field()));
  if (!x || rank(m) != m.rows()) return std::nullopt;
  return x;
}

inline bool is_invertible(const Matrix& m) { return m.rows() == m.cols() && rank(m) == m.rows(); }

inline Matrix subspace_sum(const Matrix& u, const Matrix& w) { return image_basis(hstack(u, w)); }

inline Matrix subspace_intersection(const Matrix& u, const Matrix& w) {
  if (u.rows() != w.rows()) throw std::invalid_argument("subspace_intersection: ambient mismatch");
  if (u.cols() == 0 || w.cols() == 0) return Matrix(u.rows(), 0, u.field());
  const Matrix k = kernel_basis(hstack(u, w));
  return image_basis(u * k.rows_range(0, u.cols()));
}

// Columns of `ambient` (greedy, in order) completing `sub` to a basis of span(sub, ambient).
inline Matrix quotient_basis(const Matrix& sub, const Matrix& ambient) {
  const auto pivots = rref(hstack(sub, ambient)).pivots;
  std::vector<std::size_t> chosen;
  for (auto c : pivots)
    if (c >= sub.cols()) chosen.push_back(c - sub.cols());
  return ambient.select_cols(chosen);
}

// Canonical form of span(columns): the nonzero rows of rref(basis^T).
inline Matrix canonical_span(const Matrix& basis) {
  auto r = rref(basis.transpose());
  return r.reduced.rows_range(0, r.rank());
}

inline Matrix matrix_power(Matrix m, std::size_t e) {
  Matrix result = Matrix::identity(m.rows(), m.field());
  while (e > 0) {
    if (e & 1u) result = result * m;
    m = m * m;
    e >>= 1;
  }
  return result;
}

inline bool is_nilpotent(const Matrix& m) { return matrix_power(m, m.rows()).is_zero(); }

// Enumerates all p^n vectors of F_p^n in lexicographic order (little-endian counter).
class VectorOdometer {
 public:
  VectorOdometer(std::size_t n, Fp f) : v_(n, 0), p_(f.p()) {}
  const std::vector<Scalar>& value() const { return v_; }
  bool next() {
    for (auto& x : v_) {
      if (++x < p_) return true;
      x = 0;
    }
    return false;
  }

 private:
  std::vector<Scalar> v_;
  Scalar p_;
};

// p^n with saturation at `cap + 1`.
inline std::uint64_t bounded_power(std::uint64_t p, std::size_t n, std::uint64_t cap) {
  std::uint64_t r = 1;
  for (std::size_t i = 0; i < n; ++i) {
    r *= p;
    if (r > cap) return cap + 1;
  }
  return r;
}

}  // namespace qrep
