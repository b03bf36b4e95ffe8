#include "hsd/constants_lattice.hpp"

namespace hsd {

Subspace::Subspace(const Field& field, std::size_t n, Echelon e)
    : field_(&field), n_(n), basis_(std::move(e.rref)), pivots_(std::move(e.pivots)) {}

Subspace Subspace::ambient(const Field& field, std::size_t n) {
  return Subspace(field, n, row_reduce(Matrix::identity(field, n)));
}

Subspace Subspace::zero(const Field& field, std::size_t n) { return Subspace(field, n, row_reduce(Matrix(field, 0, n))); }

Subspace Subspace::span(const Field& field, std::size_t n, const std::vector<Vector>& vectors) {
  return Subspace(field, n, row_reduce(Matrix::from_rows(field, n, vectors)));
}

Subspace Subspace::kernel(const Matrix& m) { return span(m.field(), m.cols(), kernel_basis(m)); }

Subspace Subspace::image(const Matrix& m) { return Subspace(m.field(), m.rows(), row_reduce(m.transpose())); }

std::vector<Vector> Subspace::basis_vectors() const {
  std::vector<Vector> out;
  for (std::size_t r = 0; r < dim(); ++r) out.push_back(basis_.row(r));
  return out;
}

Vector Subspace::reduce(const Vector& v) const {
  if (v.size() != n_) throw Error(ErrorKind::InvalidArgument, "vector length differs from ambient dimension");
  Vector out = v;
  for (std::size_t r = 0; r < dim(); ++r) {
    std::uint32_t c = out.code(pivots_[r]);
    if (c) out.axpy(Fq(*field_, field_->neg(c)), basis_.row(r));
  }
  return out;
}

bool Subspace::contains(const Vector& v) const { return reduce(v).is_zero(); }

bool Subspace::contains(const Subspace& o) const {
  for (std::size_t r = 0; r < o.dim(); ++r)
    if (!contains(o.basis_.row(r))) return false;
  return true;
}

Vector Subspace::coordinates(const Vector& v) const {
  Vector out(*field_, dim());
  for (std::size_t r = 0; r < dim(); ++r) out.code(r) = v.code(pivots_[r]);
  if (!reduce(v).is_zero()) throw Error(ErrorKind::InvalidArgument, "vector not in subspace");
  return out;
}

Matrix Subspace::inclusion() const { return basis_.transpose(); }

Subspace Subspace::sum(const Subspace& o) const {
  std::vector<Vector> all = basis_vectors();
  for (auto& v : o.basis_vectors()) all.push_back(std::move(v));
  return span(*field_, n_, all);
}

Subspace Subspace::intersect(const Subspace& o) const {
  if (o.n_ != n_) throw Error(ErrorKind::InvalidArgument, "subspaces of different spaces");
  if (dim() == 0 || o.dim() == 0) return zero(*field_, n_);
  // annihilator of o, then the part of this it kills
  std::vector<Vector> ann = kernel_basis(o.basis_);
  if (ann.empty()) return *this;
  Matrix eqs = Matrix::from_rows(*field_, n_, ann);
  Matrix inc = inclusion();
  std::vector<Vector> coords = kernel_basis(eqs * inc);
  std::vector<Vector> vecs;
  for (auto& c : coords) vecs.push_back(inc * c);
  return span(*field_, n_, vecs);
}

std::optional<Matrix> restrict_operator(const Matrix& t, const Subspace& v) {
  if (t.rows() != v.ambient_dim() || t.cols() != v.ambient_dim())
    throw Error(ErrorKind::InvalidArgument, "operator and subspace sizes differ");
  Matrix out(t.field(), v.dim(), v.dim());
  for (std::size_t c = 0; c < v.dim(); ++c) {
    Vector img = t * v.basis().row(c);
    if (!v.contains(img)) return std::nullopt;
    Vector coords = v.coordinates(img);
    for (std::size_t r = 0; r < v.dim(); ++r) out.code(r, c) = coords.code(r);
  }
  return out;
}

Vector preimage_solve(const Matrix& t, const Vector& target, const Subspace* within) {
  if (!within) {
    auto x = solve(t, target);
    if (!x) throw Error(ErrorKind::NoSolution, "target not in the image");
    return *x;
  }
  Matrix inc = within->inclusion();
  auto c = solve(t * inc, target);
  if (!c) throw Error(ErrorKind::NoSolution, "target not in the image of the subspace");
  return inc * *c;
}

ZmReport zm_check(const Matrix& t, std::uint32_t p) {
  ZmReport r;
  Matrix tp1 = t.pow(p - 1);
  r.nilpotent_p = (tp1 * t).is_zero();
  r.ker_im_equal = Subspace::kernel(tp1) == Subspace::image(t);
  return r;
}

ZmReport zm_check(const Matrix& t, const Subspace& on, std::uint32_t p) {
  auto r = restrict_operator(t, on);
  if (!r) throw Error(ErrorKind::HypothesisFailure, "operator does not preserve the subspace");
  if (r->rows() == 0) return {true, true};
  return zm_check(*r, p);
}

Subspace kernel_component(const HSDerivation& d, const MultiIndex& i) { return Subspace::kernel(d.component(i)); }

Subspace constants(const HSDerivation& d) { return tower_level(d, 0); }

Subspace absolute_constants(const HSDerivation& d) {
  const auto& mats = d.components();
  std::vector<const Matrix*> blocks;
  for (std::size_t i = 1; i < mats.size(); ++i) blocks.push_back(&mats[i]);
  if (blocks.empty()) return Subspace::ambient(d.model()->field(), d.model()->dim());
  return Subspace::kernel(Matrix::vstack(blocks));
}

Subspace tower_level(const HSDerivation& d, int s) {
  const ArtinianModel& a = *d.model();
  if (s < 0) return Subspace::ambient(a.field(), a.dim());
  if (static_cast<unsigned>(s) >= a.m()) throw Error(ErrorKind::IndexRange, "tower level beyond m-1");
  std::vector<const Matrix*> blocks;
  std::uint32_t pj = 1;
  for (int j = 0; j <= s; ++j, pj *= a.p())
    for (unsigned l = 0; l < a.e(); ++l) blocks.push_back(&d.component(unit_index(a.e(), l, pj)));
  return Subspace::kernel(Matrix::vstack(blocks));
}

bool multiplicatively_closed(const ArtinianModel& model, const Subspace& s) {
  auto basis = s.basis_vectors();
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = i; j < basis.size(); ++j)
      if (!s.contains(model.multiply(basis[i], basis[j]))) return false;
  return true;
}

ConstantsTower tower(const HSDerivation& d, bool check_closure) {
  const ArtinianModel& a = *d.model();
  ConstantsTower t;
  std::size_t pe = 1;
  for (unsigned i = 0; i < a.e(); ++i) pe *= a.p();
  for (int s = -1; s < static_cast<int>(a.m()); ++s) {
    t.levels.push_back(tower_level(d, s));
    t.dims.push_back(t.levels.back().dim());
    t.multiplicatively_closed.push_back(check_closure && s >= 0 ? multiplicatively_closed(a, t.levels.back()) : true);
  }
  for (std::size_t s = 1; s < t.dims.size(); ++s) {
    if (t.dims[s] != 0 && t.dims[s - 1] % t.dims[s] == 0) {
      t.ratios.push_back(t.dims[s - 1] / t.dims[s]);
      if (t.dims[s - 1] / t.dims[s] != pe) t.degenerate = true;
    } else {
      t.ratios.push_back(std::nullopt);
      t.degenerate = true;
    }
  }
  return t;
}

}  // namespace hsd
