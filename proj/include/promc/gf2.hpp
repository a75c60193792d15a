#pragma once

// Dense matrices over the two-element field with the handful of exact
// elimination routines the chain-complex instance needs.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace promc::gf2 {

class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), words_((cols + 63) / 64), bits_(rows * words_, 0) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.set(i, i, true);
    return m;
  }

  static Matrix from_rows(const std::vector<std::vector<int>>& rows, std::size_t cols) {
    Matrix m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != cols) throw std::invalid_argument("ragged matrix row");
      for (std::size_t j = 0; j < cols; ++j) {
        if (rows[i][j] != 0 && rows[i][j] != 1) throw std::invalid_argument("matrix entry not in {0,1}");
        m.set(i, j, rows[i][j] == 1);
      }
    }
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  bool get(std::size_t r, std::size_t c) const {
    return (bits_[r * words_ + c / 64] >> (c % 64)) & 1u;
  }
  void set(std::size_t r, std::size_t c, bool v) {
    auto& w = bits_[r * words_ + c / 64];
    const std::uint64_t mask = std::uint64_t{1} << (c % 64);
    w = v ? (w | mask) : (w & ~mask);
  }
  void flip(std::size_t r, std::size_t c) { bits_[r * words_ + c / 64] ^= std::uint64_t{1} << (c % 64); }

  // row(dst) ^= row(src)
  void add_row(std::size_t dst, std::size_t src) {
    for (std::size_t w = 0; w < words_; ++w) bits_[dst * words_ + w] ^= bits_[src * words_ + w];
  }
  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t w = 0; w < words_; ++w) std::swap(bits_[a * words_ + w], bits_[b * words_ + w]);
  }
  bool row_is_zero(std::size_t r) const {
    for (std::size_t w = 0; w < words_; ++w)
      if (bits_[r * words_ + w] != 0) return false;
    return true;
  }
  bool is_zero() const {
    return std::all_of(bits_.begin(), bits_.end(), [](std::uint64_t w) { return w == 0; });
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.bits_ == b.bits_;
  }

  friend Matrix operator+(const Matrix& a, const Matrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw std::invalid_argument("matrix sum shape mismatch");
    Matrix c = a;
    for (std::size_t i = 0; i < c.bits_.size(); ++i) c.bits_[i] ^= b.bits_[i];
    return c;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw std::invalid_argument("matrix product shape mismatch");
    Matrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k)
        if (a.get(i, k))
          for (std::size_t w = 0; w < c.words_; ++w) c.bits_[i * c.words_ + w] ^= b.bits_[k * b.words_ + w];
    return c;
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j)
        if (get(i, j)) t.set(j, i, true);
    return t;
  }

  Matrix column(std::size_t c) const {
    Matrix v(rows_, 1);
    for (std::size_t i = 0; i < rows_; ++i) v.set(i, 0, get(i, c));
    return v;
  }

  Matrix columns(const std::vector<std::size_t>& cs) const {
    Matrix m(rows_, cs.size());
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cs.size(); ++j) m.set(i, j, get(i, cs[j]));
    return m;
  }

  Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    Matrix m(nr, nc);
    for (std::size_t i = 0; i < nr; ++i)
      for (std::size_t j = 0; j < nc; ++j) m.set(i, j, get(r0 + i, c0 + j));
    return m;
  }

  void put(std::size_t r0, std::size_t c0, const Matrix& src) {
    for (std::size_t i = 0; i < src.rows_; ++i)
      for (std::size_t j = 0; j < src.cols_; ++j) set(r0 + i, c0 + j, src.get(i, j));
  }

  std::vector<std::vector<int>> to_rows() const {
    std::vector<std::vector<int>> out(rows_, std::vector<int>(cols_, 0));
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) out[i][j] = get(i, j) ? 1 : 0;
    return out;
  }

  std::string str() const {
    std::ostringstream os;
    os << rows_ << "x" << cols_ << "[";
    for (std::size_t i = 0; i < rows_; ++i) {
      if (i) os << ";";
      for (std::size_t j = 0; j < cols_; ++j) os << (get(i, j) ? '1' : '0');
    }
    os << "]";
    return os.str();
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::size_t words_ = 0;
  std::vector<std::uint64_t> bits_;
};

inline Matrix hstack(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) throw std::invalid_argument("hstack row mismatch");
  Matrix m(a.rows(), a.cols() + b.cols());
  m.put(0, 0, a);
  m.put(0, a.cols(), b);
  return m;
}

inline Matrix vstack(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.cols()) throw std::invalid_argument("vstack column mismatch");
  Matrix m(a.rows() + b.rows(), a.cols());
  m.put(0, 0, a);
  m.put(a.rows(), 0, b);
  return m;
}

inline Matrix direct_sum(const Matrix& a, const Matrix& b) {
  Matrix m(a.rows() + b.rows(), a.cols() + b.cols());
  m.put(0, 0, a);
  m.put(a.rows(), a.cols(), b);
  return m;
}

/// Reduced row-echelon form. Pivots are chosen lowest row index first and
/// are reported in increasing column order.
struct Echelon {
  Matrix reduced;
  std::vector<std::size_t> pivots;
};

inline Echelon rref(Matrix m) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t p = r;
    while (p < m.rows() && !m.get(p, c)) ++p;
    if (p == m.rows()) continue;
    m.swap_rows(r, p);
    for (std::size_t i = 0; i < m.rows(); ++i)
      if (i != r && m.get(i, c)) m.add_row(i, r);
    pivots.push_back(c);
    ++r;
  }
  return {std::move(m), std::move(pivots)};
}

inline std::size_t rank(const Matrix& m) { return rref(m).pivots.size(); }

/// Columns form a basis of the null space; free variables in increasing order.
inline Matrix kernel(const Matrix& m) {
  const auto e = rref(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto c : e.pivots) is_pivot[c] = true;
  std::vector<std::size_t> free;
  for (std::size_t c = 0; c < m.cols(); ++c)
    if (!is_pivot[c]) free.push_back(c);
  Matrix basis(m.cols(), free.size());
  for (std::size_t k = 0; k < free.size(); ++k) {
    basis.set(free[k], k, true);
    for (std::size_t r = 0; r < e.pivots.size(); ++r)
      if (e.reduced.get(r, free[k])) basis.set(e.pivots[r], k, true);
  }
  return basis;
}

/// Basis (as columns) of the column space, taken from the pivot columns of m.
inline Matrix image(const Matrix& m) { return m.columns(rref(m).pivots); }

/// Some x with a * x = b (b may have several columns); free variables are set
/// to zero so the answer is deterministic.
inline std::optional<Matrix> solve(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) throw std::invalid_argument("solve shape mismatch");
  const auto e = rref(hstack(a, b));
  Matrix x(a.cols(), b.cols());
  for (std::size_t r = 0; r < e.pivots.size(); ++r) {
    const auto c = e.pivots[r];
    if (c >= a.cols()) return std::nullopt;
    for (std::size_t j = 0; j < b.cols(); ++j) x.set(c, j, e.reduced.get(r, a.cols() + j));
  }
  return x;
}

/// Some y with y * a = b.
inline std::optional<Matrix> solve_left(const Matrix& a, const Matrix& b) {
  auto t = solve(a.transpose(), b.transpose());
  if (!t) return std::nullopt;
  return t->transpose();
}

inline std::optional<Matrix> inverse(const Matrix& m) {
  if (m.rows() != m.cols()) return std::nullopt;
  if (rank(m) != m.rows()) return std::nullopt;
  return solve(m, Matrix::identity(m.rows()));
}

/// Standard basis vectors completing the column space of `sub` to the whole
/// space, lowest index first.
inline std::vector<std::size_t> complement_coordinates(const Matrix& sub) {
  std::vector<std::size_t> out;
  for (auto c : rref(hstack(sub, Matrix::identity(sub.rows()))).pivots)
    if (c >= sub.cols()) out.push_back(c - sub.cols());
  return out;
}

inline Matrix unit_columns(std::size_t n, const std::vector<std::size_t>& coords) {
  Matrix m(n, coords.size());
  for (std::size_t k = 0; k < coords.size(); ++k) m.set(coords[k], k, true);
  return m;
}

}  // namespace promc::gf2
