#include "hsd/matrix.hpp"

#include <algorithm>

namespace hsd {

namespace {

void require_same(const Field* a, const Field* b) {
  if (a != b) throw Error(ErrorKind::ContextMismatch, "linear algebra over different fields");
}

// dst[0..n) += c * src[0..n)
void row_axpy(const Field& k, std::uint32_t* dst, const std::uint32_t* src, std::uint32_t c, std::size_t n) {
  if (c == 0) return;
  if (k.d() == 1) {
    const std::uint64_t p = k.p();
    for (std::size_t i = 0; i < n; ++i) {
      if (src[i]) dst[i] = static_cast<std::uint32_t>((dst[i] + static_cast<std::uint64_t>(c) * src[i]) % p);
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      if (src[i]) dst[i] = k.add(dst[i], k.mul(c, src[i]));
    }
  }
}

void row_scale(const Field& k, std::uint32_t* dst, std::uint32_t c, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] = k.mul(dst[i], c);
}

}  // namespace

Vector Vector::unit(const Field& field, std::size_t n, std::size_t i) {
  Vector v(field, n);
  v.data_.at(i) = 1;
  return v;
}

bool Vector::is_zero() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](std::uint32_t c) { return c == 0; });
}

std::size_t Vector::leading_index() const noexcept {
  for (std::size_t i = 0; i < data_.size(); ++i)
    if (data_[i]) return i;
  return data_.size();
}

Vector& Vector::operator+=(const Vector& o) {
  require_same(field_, o.field_);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] = field_->add(data_[i], o.data_[i]);
  return *this;
}

Vector& Vector::operator-=(const Vector& o) {
  require_same(field_, o.field_);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] = field_->sub(data_[i], o.data_[i]);
  return *this;
}

Vector operator*(Vector a, Fq c) {
  for (auto& x : a.data_) x = a.field_->mul(x, c.code());
  return a;
}

Vector Vector::operator-() const {
  Vector out(*this);
  for (auto& x : out.data_) x = field_->neg(x);
  return out;
}

void Vector::axpy(Fq c, const Vector& o) {
  require_same(field_, o.field_);
  row_axpy(*field_, data_.data(), o.data_.data(), c.code(), data_.size());
}

Matrix Matrix::identity(const Field& field, std::size_t n) {
  Matrix m(field, n, n);
  for (std::size_t i = 0; i < n; ++i) m.data_[i * n + i] = 1;
  return m;
}

Matrix Matrix::from_columns(const Field& field, std::size_t rows, const std::vector<Vector>& cols) {
  Matrix m(field, rows, cols.size());
  for (std::size_t c = 0; c < cols.size(); ++c) {
    if (cols[c].size() != rows) throw Error(ErrorKind::InvalidArgument, "column length mismatch");
    for (std::size_t r = 0; r < rows; ++r) m.data_[r * m.cols_ + c] = cols[c].code(r);
  }
  return m;
}

Matrix Matrix::from_rows(const Field& field, std::size_t cols, const std::vector<Vector>& rows) {
  Matrix m(field, rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) throw Error(ErrorKind::InvalidArgument, "row length mismatch");
    std::copy(rows[r].codes().begin(), rows[r].codes().end(), m.data_.begin() + r * cols);
  }
  return m;
}

Matrix Matrix::vstack(const std::vector<const Matrix*>& blocks) {
  if (blocks.empty()) throw Error(ErrorKind::InvalidArgument, "nothing to stack");
  std::size_t rows = 0;
  for (auto* b : blocks) {
    if (b->cols_ != blocks[0]->cols_) throw Error(ErrorKind::InvalidArgument, "column count mismatch");
    require_same(b->field_, blocks[0]->field_);
    rows += b->rows_;
  }
  Matrix m(*blocks[0]->field_, rows, blocks[0]->cols_);
  auto it = m.data_.begin();
  for (auto* b : blocks) it = std::copy(b->data_.begin(), b->data_.end(), it);
  return m;
}

Vector Matrix::row(std::size_t r) const {
  Vector v(*field_, cols_);
  for (std::size_t c = 0; c < cols_; ++c) v.code(c) = data_[r * cols_ + c];
  return v;
}

Vector Matrix::column(std::size_t c) const {
  Vector v(*field_, rows_);
  for (std::size_t r = 0; r < rows_; ++r) v.code(r) = data_[r * cols_ + c];
  return v;
}

bool Matrix::is_zero() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](std::uint32_t c) { return c == 0; });
}

Matrix Matrix::transpose() const {
  Matrix t(*field_, cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t.data_[c * rows_ + r] = data_[r * cols_ + c];
  return t;
}

Matrix& Matrix::operator+=(const Matrix& o) {
  require_same(field_, o.field_);
  if (rows_ != o.rows_ || cols_ != o.cols_) throw Error(ErrorKind::InvalidArgument, "matrix shape mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] = field_->add(data_[i], o.data_[i]);
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& o) {
  require_same(field_, o.field_);
  if (rows_ != o.rows_ || cols_ != o.cols_) throw Error(ErrorKind::InvalidArgument, "matrix shape mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] = field_->sub(data_[i], o.data_[i]);
  return *this;
}

void Matrix::axpy(Fq c, const Matrix& o) {
  require_same(field_, o.field_);
  if (rows_ != o.rows_ || cols_ != o.cols_) throw Error(ErrorKind::InvalidArgument, "matrix shape mismatch");
  row_axpy(*field_, data_.data(), o.data_.data(), c.code(), data_.size());
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  require_same(a.field_, b.field_);
  if (a.cols_ != b.rows_) throw Error(ErrorKind::InvalidArgument, "matrix shape mismatch in product");
  const Field& k = *a.field_;
  Matrix out(k, a.rows_, b.cols_);
  if (k.d() == 1 && static_cast<std::uint64_t>(k.p()) * k.p() * (a.cols_ + 1) < (std::uint64_t{1} << 62)) {
    const std::uint64_t p = k.p();
    std::vector<std::uint64_t> acc(b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i) {
      std::fill(acc.begin(), acc.end(), 0);
      const std::uint32_t* ar = a.row_data(i);
      for (std::size_t l = 0; l < a.cols_; ++l) {
        const std::uint64_t x = ar[l];
        if (!x) continue;
        const std::uint32_t* br = b.row_data(l);
        for (std::size_t j = 0; j < b.cols_; ++j) acc[j] += x * br[j];
      }
      std::uint32_t* orow = out.row_data(i);
      for (std::size_t j = 0; j < b.cols_; ++j) orow[j] = static_cast<std::uint32_t>(acc[j] % p);
    }
    return out;
  }
  for (std::size_t i = 0; i < a.rows_; ++i) {
    const std::uint32_t* ar = a.row_data(i);
    for (std::size_t l = 0; l < a.cols_; ++l) row_axpy(k, out.row_data(i), b.row_data(l), ar[l], b.cols_);
  }
  return out;
}

Vector operator*(const Matrix& a, const Vector& v) {
  require_same(a.field_, &v.field());
  if (a.cols_ != v.size()) throw Error(ErrorKind::InvalidArgument, "matrix-vector shape mismatch");
  const Field& k = *a.field_;
  Vector out(k, a.rows_);
  for (std::size_t i = 0; i < a.rows_; ++i) {
    const std::uint32_t* ar = a.row_data(i);
    if (k.d() == 1) {
      std::uint64_t acc = 0;
      const std::uint64_t p = k.p();
      for (std::size_t l = 0; l < a.cols_; ++l) acc = (acc + static_cast<std::uint64_t>(ar[l]) * v.code(l)) % p;
      out.code(i) = static_cast<std::uint32_t>(acc);
    } else {
      std::uint32_t acc = 0;
      for (std::size_t l = 0; l < a.cols_; ++l) acc = k.add(acc, k.mul(ar[l], v.code(l)));
      out.code(i) = acc;
    }
  }
  return out;
}

Matrix operator*(Matrix a, Fq c) {
  for (auto& x : a.data_) x = a.field_->mul(x, c.code());
  return a;
}

Matrix Matrix::pow(std::uint64_t n) const {
  if (rows_ != cols_) throw Error(ErrorKind::InvalidArgument, "power of a non-square matrix");
  Matrix result = identity(*field_, rows_);
  Matrix base = *this;
  while (n) {
    if (n & 1) result = result * base;
    n >>= 1;
    if (n) base = base * base;
  }
  return result;
}

Echelon row_reduce(Matrix m) {
  const Field& k = m.field();
  const std::size_t rows = m.rows(), cols = m.cols();
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = rows;
    for (std::size_t i = r; i < rows; ++i) {
      if (m.code(i, c)) {
        piv = i;
        break;
      }
    }
    if (piv == rows) continue;
    if (piv != r) std::swap_ranges(m.row_data(piv), m.row_data(piv) + cols, m.row_data(r));
    row_scale(k, m.row_data(r), k.inv(m.code(r, c)), cols);
    for (std::size_t i = 0; i < rows; ++i) {
      if (i != r && m.code(i, c)) row_axpy(k, m.row_data(i), m.row_data(r), k.neg(m.code(i, c)), cols);
    }
    pivots.push_back(c);
    ++r;
  }
  Matrix rref(k, r, cols);
  std::copy(m.row_data(0), m.row_data(0) + r * cols, rref.row_data(0));
  return {std::move(rref), std::move(pivots)};
}

std::size_t rank(const Matrix& m) { return row_reduce(m).rank(); }

std::vector<Vector> kernel_basis(const Matrix& m) {
  const Field& k = m.field();
  Echelon e = row_reduce(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto c : e.pivots) is_pivot[c] = true;
  std::vector<Vector> out;
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    Vector v(k, m.cols());
    v.code(f) = 1;
    for (std::size_t r = 0; r < e.rank(); ++r) v.code(e.pivots[r]) = k.neg(e.rref.code(r, f));
    out.push_back(std::move(v));
  }
  return out;
}

std::optional<Vector> solve(const Matrix& a, const Vector& b) {
  if (a.rows() != b.size()) throw Error(ErrorKind::InvalidArgument, "right-hand side length mismatch");
  const Field& k = a.field();
  Matrix aug(k, a.rows(), a.cols() + 1);
  for (std::size_t r = 0; r < a.rows(); ++r) {
    std::copy(a.row_data(r), a.row_data(r) + a.cols(), aug.row_data(r));
    aug.code(r, a.cols()) = b.code(r);
  }
  Echelon e = row_reduce(std::move(aug));
  Vector x(k, a.cols());
  for (std::size_t r = 0; r < e.rank(); ++r) {
    if (e.pivots[r] == a.cols()) return std::nullopt;
    x.code(e.pivots[r]) = e.rref.code(r, a.cols());
  }
  return x;
}

std::optional<Matrix> inverse(const Matrix& m) {
  if (m.rows() != m.cols()) return std::nullopt;
  const Field& k = m.field();
  const std::size_t n = m.rows();
  if (n == 0) return Matrix(k, 0, 0);
  Matrix aug(k, n, 2 * n);
  for (std::size_t r = 0; r < n; ++r) {
    std::copy(m.row_data(r), m.row_data(r) + n, aug.row_data(r));
    aug.code(r, n + r) = 1;
  }
  Echelon e = row_reduce(std::move(aug));
  if (e.rank() < n || e.pivots[n - 1] != n - 1) return std::nullopt;
  Matrix inv(k, n, n);
  for (std::size_t r = 0; r < n; ++r) std::copy(e.rref.row_data(r) + n, e.rref.row_data(r) + 2 * n, inv.row_data(r));
  return inv;
}

}  // namespace hsd
