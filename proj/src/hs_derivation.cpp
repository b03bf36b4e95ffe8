#include "hsd/hs_derivation.hpp"

#include "hsd/poly_text.hpp"

namespace hsd {

namespace {

std::uint32_t power_of(std::uint32_t p, unsigned m) {
  std::uint64_t b = 1;
  for (unsigned i = 0; i < m; ++i) b *= p;
  if (b > (1u << 20)) throw Error(ErrorKind::ResourceLimit, "truncation bound too large");
  return static_cast<std::uint32_t>(b);
}

void require_matching_law(const ArtinianModel& model, const FormalGroupLaw& law) {
  if (&law.field() != &model.field() || law.e() != model.e() || law.m() != model.m())
    throw Error(ErrorKind::ContextMismatch, "law and model differ in field, dimension or level");
}

std::string first_difference(const Poly& a, const Poly& b) {
  const auto& ta = a.terms();
  const auto& tb = b.terms();
  std::size_t i = 0, j = 0;
  const Field& k = a.one().field();
  auto describe = [&](std::uint64_t key, Fq ca, Fq cb) {
    Poly mono = Poly::from_terms(a.layout(), a.one(), {{key, k.one()}});
    return to_string(mono) + ": " + to_string(ca) + " vs " + to_string(cb);
  };
  while (i < ta.size() || j < tb.size()) {
    if (j == tb.size() || (i < ta.size() && ta[i].first < tb[j].first)) return describe(ta[i].first, ta[i].second, k.zero());
    if (i == ta.size() || tb[j].first < ta[i].first) return describe(tb[j].first, k.zero(), tb[j].second);
    if (ta[i].second != tb[j].second) return describe(ta[i].first, ta[i].second, tb[j].second);
    ++i;
    ++j;
  }
  return {};
}

}  // namespace

// ---------------------------------------------------------------- model

ModelPtr ArtinianModel::make(const Field& field, unsigned e, unsigned m) {
  return ModelPtr(new ArtinianModel(field, e, m));
}

ArtinianModel::ArtinianModel(const Field& field, unsigned e, unsigned m)
    : field_(&field), e_(e), m_(m), bound_(power_of(field.p(), m)), basis_(e, bound_) {
  if (e == 0 || m == 0) throw Error(ErrorKind::InvalidArgument, "model needs e >= 1 and m >= 1");
  x_ = RingLayout::make({{"x", e, bound_}});
  v_ = RingLayout::make({{"v", e, bound_}});
  xv_ = RingLayout::make({{"x", e, bound_}, {"v", e, bound_}});
  xvw_ = RingLayout::make({{"x", e, bound_}, {"v", e, bound_}, {"w", e, bound_}});
}

Vector ArtinianModel::to_vector(const Poly& f) const {
  Vector out(*field_, dim());
  const RingLayout& l = *f.layout();
  MultiIndex b(e_);
  for (const auto& [key, c] : f.terms()) {
    Exponents all = l.unpack(key);
    std::fill(b.begin(), b.end(), 0);
    for (std::size_t v = 0; v < all.size(); ++v) {
      if (!all[v]) continue;
      auto xv = x_->find_var(l.var_name(v));
      if (!xv) throw Error(ErrorKind::UnknownVariable, l.var_name(v) + " is not a variable of A");
      b[*xv] += all[v];
    }
    if (!basis_.contains(b)) continue;
    std::size_t f_idx = basis_.flat(b);
    out.code(f_idx) = field_->add(out.code(f_idx), c.code());
  }
  return out;
}

Poly ArtinianModel::to_poly(const Vector& f) const {
  std::vector<Poly::Term> terms;
  for (std::size_t i = 0; i < f.size(); ++i)
    if (f.code(i)) terms.emplace_back(x_->pack(basis_[i]), f.at(i));
  return Poly::from_terms(x_, field_->one(), std::move(terms));
}

Vector ArtinianModel::parse(const std::string& text) const { return to_vector(parse_poly(text, *field_, x_)); }

std::string ArtinianModel::format(const Vector& f) const { return to_string(to_poly(f)); }

Vector ArtinianModel::one() const { return Vector::unit(*field_, dim(), 0); }

Vector ArtinianModel::constant(Fq c) const { return one() * c; }

Vector ArtinianModel::generator(unsigned j) const {
  return Vector::unit(*field_, dim(), basis_.flat(unit_index(e_, j, 1)));
}

Vector ArtinianModel::multiply(const Vector& a, const Vector& b) const {
  return to_vector(to_poly(a) * to_poly(b));
}

Vector ArtinianModel::power(const Vector& a, std::uint64_t n) const { return to_vector(to_poly(a).pow(n)); }

// ---------------------------------------------------------------- derivation

HSDerivation::HSDerivation(ModelPtr model, std::vector<Poly> images, LawPtr law)
    : model_(std::move(model)), law_(std::move(law)), images_(std::move(images)), memo_(std::make_shared<Memo>()) {
  if (images_.size() != model_->e()) throw Error(ErrorKind::InvalidArgument, "need one image per generator");
  if (law_) require_matching_law(*model_, *law_);
  const unsigned e = model_->e();
  for (unsigned j = 0; j < e; ++j) {
    if (!images_[j].layout()->same_as(*model_->xv_layout()))
      throw Error(ErrorKind::ContextMismatch, "image of x" + std::to_string(j + 1) + " is not in A[v]");
    // D_0 must be the identity
    std::vector<Poly::Term> d0;
    for (const auto& [key, c] : images_[j].terms()) {
      bool v_free = true;
      for (unsigned a = 0; a < e; ++a) v_free = v_free && model_->xv_layout()->exponent(key, e + a) == 0;
      if (v_free) d0.emplace_back(key, c);
    }
    Poly expected = variable_poly(model_->xv_layout(), model_->field(), j);
    if (Poly::from_terms(model_->xv_layout(), model_->field().one(), d0) != expected)
      throw Error(ErrorKind::InvalidArgument, "D_0(x" + std::to_string(j + 1) + ") must equal x" + std::to_string(j + 1));
  }
}

HSDerivation HSDerivation::canonical(const LawPtr& law) {
  ModelPtr model = ArtinianModel::make(law->field(), law->e(), law->m());
  const unsigned e = law->e();
  std::vector<std::optional<std::size_t>> map(2 * e);
  for (unsigned a = 0; a < e; ++a) {
    map[a] = a;          // v -> x
    map[e + a] = e + a;  // w -> v
  }
  std::vector<Poly> images;
  for (const auto& c : law->components()) images.push_back(remap(c, model->xv_layout(), map));
  return HSDerivation(model, std::move(images), law);
}

HSDerivation HSDerivation::from_images(const ModelPtr& model, std::vector<Poly> images, LawPtr law) {
  return HSDerivation(model, std::move(images), std::move(law));
}

HSDerivation HSDerivation::from_images(const ModelPtr& model, const std::vector<std::string>& images, LawPtr law) {
  std::vector<Poly> polys;
  for (const auto& t : images) polys.push_back(parse_poly(t, model->field(), model->xv_layout()));
  return HSDerivation(model, std::move(polys), std::move(law));
}

HSDerivation HSDerivation::trivial(const ModelPtr& model, LawPtr law) {
  std::vector<Poly> images;
  for (unsigned j = 0; j < model->e(); ++j) images.push_back(variable_poly(model->xv_layout(), model->field(), j));
  return HSDerivation(model, std::move(images), std::move(law));
}

HSDerivation HSDerivation::with_matrices(const ModelPtr& model, std::vector<Matrix> matrices, LawPtr law) {
  const unsigned e = model->e();
  const IndexSet& idx = model->basis();
  std::vector<Poly> images;
  Exponents ex(2 * e);
  for (unsigned j = 0; j < e; ++j) {
    const std::size_t col = idx.flat(unit_index(e, j, 1));
    std::vector<Poly::Term> terms;
    for (std::size_t i = 0; i < matrices.size(); ++i) {
      for (std::size_t b = 0; b < model->dim(); ++b) {
        std::uint32_t c = matrices[i].code(b, col);
        if (!c) continue;
        for (unsigned a = 0; a < e; ++a) {
          ex[a] = idx[b][a];
          ex[e + a] = idx[i][a];
        }
        terms.emplace_back(model->xv_layout()->pack(ex), Fq(model->field(), c));
      }
    }
    images.push_back(Poly::from_terms(model->xv_layout(), model->field().one(), std::move(terms)));
  }
  HSDerivation d(model, std::move(images), std::move(law));
  std::call_once(d.memo_->once, [&] { d.memo_->matrices = std::move(matrices); });
  return d;
}

const FormalGroupLaw& HSDerivation::require_law() const {
  if (!law_) throw Error(ErrorKind::InvalidArgument, "derivation has no attached law");
  return *law_;
}

Poly HSDerivation::apply(const Poly& f) const {
  std::map<std::string, Poly> img;
  for (unsigned j = 0; j < model_->e(); ++j) img.emplace(model_->x_layout()->var_name(j), images_[j]);
  return substitute(f, img, model_->xv_layout());
}

const std::vector<Matrix>& HSDerivation::components() const {
  std::call_once(memo_->once, [&] {
    const ArtinianModel& a = *model_;
    const IndexSet& idx = a.basis();
    const unsigned e = a.e();
    const RingLayout& l = *a.xv_layout();
    std::vector<Matrix> mats(idx.size(), Matrix(a.field(), a.dim(), a.dim()));
    std::vector<Poly> dx;  // D(x^a) by flat a
    dx.reserve(idx.size());
    MultiIndex xb(e), vi(e);
    for (std::size_t f = 0; f < idx.size(); ++f) {
      const MultiIndex& ex = idx[f];
      std::size_t last = e;
      for (std::size_t c = e; c-- > 0;) {
        if (ex[c]) {
          last = c;
          break;
        }
      }
      if (last == e) {
        dx.push_back(constant_poly(a.xv_layout(), a.field().one()));
      } else {
        MultiIndex prev = ex;
        --prev[last];
        dx.push_back(dx[idx.flat(prev)] * images_[last]);
      }
      for (const auto& [key, c] : dx.back().terms()) {
        for (unsigned t = 0; t < e; ++t) {
          xb[t] = l.exponent(key, t);
          vi[t] = l.exponent(key, e + t);
        }
        mats[idx.flat(vi)].code(idx.flat(xb), f) = c.code();
      }
    }
    memo_->matrices = std::move(mats);
  });
  return memo_->matrices;
}

const Matrix& HSDerivation::component(std::size_t flat) const {
  const auto& mats = components();
  if (flat >= mats.size()) throw Error(ErrorKind::IndexRange, "component index out of range");
  return mats[flat];
}

const Matrix& HSDerivation::component(const MultiIndex& i) const { return component(indices().flat(i)); }

Vector HSDerivation::component_apply(const MultiIndex& i, const Vector& f) const { return component(i) * f; }

// ---------------------------------------------------------------- operations

IterativityReport check_iterativity(const HSDerivation& d, const FormalGroupLaw& law, IterativityScope scope) {
  const ArtinianModel& a = *d.model();
  require_matching_law(a, law);
  const unsigned e = a.e();
  const IndexSet& idx = a.basis();
  const LayoutPtr& xvw = a.xvw_layout();
  const LayoutPtr& xv = a.xv_layout();

  // F^i moved into A[v,w]
  std::vector<Poly> fpow;
  for (const auto& pw : law.powers()) fpow.push_back(remap_by_name(pw, xvw));
  const auto& mats = d.components();

  auto route_ev = [&](const Poly& f) {
    std::vector<Poly::Term> out;
    Exponents ex(3 * e, 0);
    MultiIndex vi(e);
    for (const auto& [key, c] : f.terms()) {
      for (unsigned t = 0; t < e; ++t) {
        ex[t] = xv->exponent(key, t);
        vi[t] = xv->exponent(key, e + t);
      }
      std::uint64_t shift = xvw->pack(ex);
      for (const auto& [pk, pc] : fpow[idx.flat(vi)].terms()) {
        std::uint64_t s;
        if (xvw->mul_keys(pk, shift, s)) out.emplace_back(s, pc * c);
      }
    }
    return Poly::from_terms(xvw, a.field().one(), std::move(out));
  };
  // sparse columns of every component: (row, code) pairs
  std::vector<std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>>> sparse(mats.size());
  for (std::size_t k = 0; k < mats.size(); ++k) {
    sparse[k].resize(a.dim());
    for (std::size_t r = 0; r < a.dim(); ++r)
      for (std::size_t c = 0; c < a.dim(); ++c)
        if (mats[k].code(r, c)) sparse[k][c].emplace_back(static_cast<std::uint32_t>(r), mats[k].code(r, c));
  }
  auto route_dw = [&](const Poly& f) {
    std::vector<Poly::Term> out;
    Exponents ex(3 * e, 0);
    MultiIndex xb(e), vi(e);
    for (const auto& [key, c] : f.terms()) {
      for (unsigned t = 0; t < e; ++t) {
        xb[t] = xv->exponent(key, t);
        vi[t] = xv->exponent(key, e + t);
      }
      const std::size_t col = idx.flat(xb);
      for (std::size_t k = 0; k < mats.size(); ++k) {
        for (const auto& [row, code] : sparse[k][col]) {
          for (unsigned t = 0; t < e; ++t) {
            ex[t] = idx[row][t];
            ex[e + t] = vi[t];
            ex[2 * e + t] = idx[k][t];
          }
          out.emplace_back(xvw->pack(ex), c * Fq(a.field(), code));
        }
      }
    }
    return Poly::from_terms(xvw, a.field().one(), std::move(out));
  };

  IterativityReport report;
  auto run = [&](std::size_t which, const Poly& f) {
    Poly lhs = route_ev(f), rhs = route_dw(f);
    if (lhs != rhs) {
      report.pass = false;
      report.failing_element = which;
      report.difference = first_difference(lhs, rhs);
      return false;
    }
    return true;
  };

  if (scope == IterativityScope::Generators) {
    for (unsigned j = 0; j < e; ++j)
      if (!run(j, d.images()[j])) break;
  } else {
    Exponents ex(2 * e);
    for (std::size_t col = 0; col < a.dim(); ++col) {
      std::vector<Poly::Term> terms;
      for (std::size_t i = 0; i < mats.size(); ++i) {
        for (std::size_t b = 0; b < a.dim(); ++b) {
          std::uint32_t c = mats[i].code(b, col);
          if (!c) continue;
          for (unsigned t = 0; t < e; ++t) {
            ex[t] = idx[b][t];
            ex[e + t] = idx[i][t];
          }
          terms.emplace_back(xv->pack(ex), Fq(a.field(), c));
        }
      }
      if (!run(col, Poly::from_terms(xv, a.field().one(), std::move(terms)))) break;
    }
  }
  return report;
}

Matrix compose(const HSDerivation& d, const MultiIndex& j, const MultiIndex& i) {
  return d.component(j) * d.component(i);
}

std::vector<Matrix> p_fold_evP(const HSDerivation& d) {
  const FormalGroupLaw& law = d.require_law();
  const auto& coeffs = law.evp_coefficients();
  const auto& mats = d.components();
  const ArtinianModel& a = *d.model();
  std::vector<Matrix> out;
  out.reserve(mats.size());
  for (std::size_t i = 0; i < mats.size(); ++i) {
    Matrix acc(a.field(), a.dim(), a.dim());
    for (const auto& [k, c] : coeffs[i]) acc.axpy(c, mats[k]);
    out.push_back(std::move(acc));
  }
  return out;
}

HSDerivation truncate_derivation(const HSDerivation& d, unsigned m_prime) {
  const ArtinianModel& a = *d.model();
  if (m_prime == 0 || m_prime > a.m())
    throw Error(ErrorKind::TruncationOrder, "cannot truncate level " + std::to_string(a.m()) + " to level " +
                                                std::to_string(m_prime));
  ModelPtr model = ArtinianModel::make(a.field(), a.e(), m_prime);
  std::vector<Poly> images;
  for (const auto& img : d.images()) images.push_back(remap_by_name(img, model->xv_layout()));
  LawPtr law = d.law() ? truncate_law(d.law(), m_prime) : nullptr;
  return HSDerivation::from_images(model, std::move(images), std::move(law));
}

HSDerivation twist_by_automorphism(const HSDerivation& d, const std::vector<Poly>& phi) {
  const ModelPtr& model = d.model();
  const ArtinianModel& a = *model;
  const unsigned e = a.e();
  if (phi.size() != e) throw Error(ErrorKind::InvalidArgument, "automorphism needs one image per generator");
  std::vector<Vector> images;
  for (unsigned j = 0; j < e; ++j) {
    Vector v = a.to_vector(phi[j]);
    if (v.code(0) != 0)
      throw Error(ErrorKind::NonNilpotentImage, "automorphism image of x" + std::to_string(j + 1) + " has a constant term");
    images.push_back(std::move(v));
  }
  // linear part must be invertible
  Matrix jac(a.field(), e, e);
  for (unsigned j = 0; j < e; ++j)
    for (unsigned l = 0; l < e; ++l) jac.code(l, j) = images[j].code(a.basis().flat(unit_index(e, l, 1)));
  if (rank(jac) < e) throw Error(ErrorKind::NotInvertible, "linear part of the automorphism is singular");

  // Phi: column f is phi(x^f)
  const IndexSet& idx = a.basis();
  std::vector<Vector> cols;
  cols.reserve(a.dim());
  for (std::size_t f = 0; f < idx.size(); ++f) {
    const MultiIndex& ex = idx[f];
    std::size_t last = e;
    for (std::size_t c = e; c-- > 0;) {
      if (ex[c]) {
        last = c;
        break;
      }
    }
    if (last == e) {
      cols.push_back(a.one());
    } else {
      MultiIndex prev = ex;
      --prev[last];
      cols.push_back(a.multiply(cols[idx.flat(prev)], images[last]));
    }
  }
  Matrix big_phi = Matrix::from_columns(a.field(), a.dim(), cols);
  auto inv = inverse(big_phi);
  if (!inv) throw Error(ErrorKind::NotInvertible, "automorphism matrix is singular");
  std::vector<Matrix> mats;
  mats.reserve(a.dim());
  for (const auto& m : d.components()) mats.push_back(big_phi * m * *inv);
  return HSDerivation::with_matrices(model, std::move(mats), d.law());
}

HSDerivation twist_by_automorphism(const HSDerivation& d, const std::vector<std::string>& phi) {
  std::vector<Poly> polys;
  for (const auto& t : phi) polys.push_back(parse_poly(t, d.model()->field(), d.model()->x_layout()));
  return twist_by_automorphism(d, polys);
}

HSDerivation reconstruct_from_ppowers(const HSDerivation& d) {
  const FormalGroupLaw& law = d.require_law();
  const ArtinianModel& a = *d.model();
  const IndexSet& idx = a.basis();
  const std::uint32_t p = a.p();
  const unsigned e = a.e();
  const auto& given = d.components();
  std::vector<Matrix> rec(idx.size());
  for (std::size_t f = 0; f < idx.size(); ++f) {
    const MultiIndex& k = idx[f];
    std::size_t nonzero = 0, l = e;
    for (unsigned c = 0; c < e; ++c) {
      if (k[c]) {
        ++nonzero;
        if (l == e) l = c;
      }
    }
    if (nonzero == 0) {
      rec[f] = Matrix::identity(a.field(), a.dim());
      continue;
    }
    // highest p-adic digit of k_l
    std::uint32_t ps = 1;
    while (static_cast<std::uint64_t>(ps) * p <= k[l]) ps *= p;
    if (nonzero == 1 && k[l] == ps) {
      rec[f] = given[f];
      continue;
    }
    MultiIndex jj = unit_index(e, static_cast<unsigned>(l), ps);
    MultiIndex ii = k;
    ii[l] -= ps;
    const std::size_t fj = idx.flat(jj), fi = idx.flat(ii);
    // D_jj D_ii = sum_q c^q_{ii,jj} D_q
    Matrix acc = rec[fj] * rec[fi];
    Fq lead = a.field().zero();
    for (const auto& [q, c] : law.structure_constants(fi, fj)) {
      if (q == f) {
        lead = c;
        continue;
      }
      if (q > f || !rec[q].has_field())
        throw Error(ErrorKind::ReconstructionMismatch, "structure constants reach an index not yet rebuilt");
      acc.axpy(-c, rec[q]);
    }
    if (lead.is_zero())
      throw Error(ErrorKind::ReconstructionMismatch, "leading structure constant vanishes at " + index_text(k));
    rec[f] = acc * lead.inverse();
  }
  for (std::size_t f = 0; f < idx.size(); ++f) {
    if (rec[f] != given[f])
      throw Error(ErrorKind::ReconstructionMismatch, "rebuilt component " + index_text(idx[f]) + " differs");
  }
  return HSDerivation::with_matrices(d.model(), std::move(rec), d.law());
}

}  // namespace hsd
