#include "hsd/canonical_basis.hpp"

#include <map>

namespace hsd {

namespace {

std::uint64_t ipow(std::uint64_t b, unsigned n) {
  std::uint64_t r = 1;
  while (n--) r *= b;
  return r;
}

/// The derivation seen through the coordinates of one factor, acting on the
/// common kernel U of the unit p-power components of the other coordinates.
struct Family {
  const HSDerivation* d;
  const ArtinianModel* a;
  std::vector<unsigned> coords;
  Subspace U;
  std::uint32_t p;
  unsigned m;

  unsigned ef() const { return static_cast<unsigned>(coords.size()); }

  MultiIndex ambient(const MultiIndex& local) const {
    MultiIndex out(a->e(), 0);
    for (unsigned c = 0; c < ef(); ++c) out[coords[c]] = local[c];
    return out;
  }
  MultiIndex unit(unsigned c, std::uint32_t n) const { return unit_index(ef(), c, n); }
  const Matrix& op(const MultiIndex& local) const { return d->component(ambient(local)); }
  std::string name(const MultiIndex& local) const { return "D_" + index_text(ambient(local)); }

  Subspace C(const MultiIndex& local) const { return U.intersect(Subspace::kernel(op(local))); }

  Subspace F(int s) const {
    if (s < 0) return U;
    std::vector<const Matrix*> blocks;
    for (int j = 0; j <= s; ++j)
      for (unsigned c = 0; c < ef(); ++c) blocks.push_back(&op(unit(c, static_cast<std::uint32_t>(ipow(p, j)))));
    return U.intersect(Subspace::kernel(Matrix::vstack(blocks)));
  }
};

Family make_family(const HSDerivation& d, std::vector<unsigned> coords) {
  const ArtinianModel& a = *d.model();
  std::vector<bool> inside(a.e(), false);
  for (unsigned c : coords) inside.at(c) = true;
  std::vector<const Matrix*> blocks;
  for (unsigned l = 0; l < a.e(); ++l) {
    if (inside[l]) continue;
    std::uint32_t pj = 1;
    for (unsigned j = 0; j < a.m(); ++j, pj *= a.p()) blocks.push_back(&d.component(unit_index(a.e(), l, pj)));
  }
  Subspace U = blocks.empty() ? Subspace::ambient(a.field(), a.dim()) : Subspace::kernel(Matrix::vstack(blocks));
  return Family{&d, &a, std::move(coords), std::move(U), a.p(), a.m()};
}

Family whole_family(const HSDerivation& d) {
  std::vector<unsigned> coords(d.model()->e());
  for (unsigned c = 0; c < coords.size(); ++c) coords[c] = c;
  return make_family(d, std::move(coords));
}

void check_degree(const Family& f) {
  std::size_t dim0 = f.F(0).dim();
  std::uint64_t pe = ipow(f.p, f.ef());
  if (dim0 == 0 || f.U.dim() != pe * dim0)
    throw Error(ErrorKind::HypothesisFailure, "dimension " + std::to_string(f.U.dim()) + " over constants of dimension " +
                                                  std::to_string(dim0) + " is not p^" + std::to_string(f.ef()));
}

/// z in `on` with D_i z = defect, after checking that D_i restricted to `on`
/// satisfies ker T^(p-1) = im T and T^p = 0.
Vector correct(const Family& f, const MultiIndex& i, const Vector& defect, const Subspace& on,
               const std::string& on_name) {
  const Matrix& t = f.op(i);
  if (!on.contains(defect))
    throw Error(ErrorKind::HypothesisFailure, "defect of " + f.name(i) + " does not lie in " + on_name);
  auto r = restrict_operator(t, on);
  if (!r) throw Error(ErrorKind::HypothesisFailure, f.name(i) + " does not preserve " + on_name);
  if (r->rows() > 0 && !zm_check(*r, f.p).holds())
    throw Error(ErrorKind::HypothesisFailure, "ker T^(p-1) = im T fails for T = " + f.name(i) + " on " + on_name);
  try {
    return preimage_solve(t, defect, &on);
  } catch (const Error&) {
    throw Error(ErrorKind::CorrectionUnsolvable, "no z in " + on_name + " with " + f.name(i) + " z equal to the defect");
  }
}

std::string level_name(int s) { return "F_" + std::to_string(s); }

Vector apply_times(const Matrix& t, Vector v, unsigned n) {
  while (n--) v = t * v;
  return v;
}

const FormalGroupLaw& require_kind(const HSDerivation& d, LawKind kind) {
  const FormalGroupLaw& law = d.require_law();
  if (law.kind() != kind) throw Error(ErrorKind::InvalidArgument, "law is " + to_string(law.kind()) + ", expected " + to_string(kind));
  return law;
}

// Family-local tables over the box [p^m]^ef.

Vector local_y_expected(const Family& f, const Vector& y, const MultiIndex& i) {
  if (i[0] == 0 && i[1] == 0) return y;
  if (i[0] == 0 && i[1] == 1) return f.a->one();
  return Vector(f.a->field(), f.a->dim());
}

Vector local_x_expected(const Family& f, const FormalGroupLaw& law, const Vector& x, const Vector& y,
                        const MultiIndex& i) {
  Vector zero(f.a->field(), f.a->dim());
  if (i[0] == 0 && i[1] == 0) return x;
  if (i[0] == 1 && i[1] == 0) return f.a->one();
  if (i[0] != 0) return zero;
  auto lambda = lambda_coeffs(f.p);
  std::uint64_t pl = 1;
  for (int l = 0; l <= law.top_alpha(); ++l, pl *= f.p) {
    if (i[1] % pl != 0) break;
    std::uint64_t k = i[1] / pl;
    if (k >= 1 && k < f.p) {
      Fq c = law.alpha(static_cast<unsigned>(l)) * law.field().from_int(lambda[k - 1]);
      if (c.is_zero()) return zero;
      return f.a->power(y, (f.p - k) * pl) * c;
    }
  }
  return zero;
}

template <class Expected>
std::optional<MultiIndex> local_mismatch(const Family& f, const Vector& z, Expected expected) {
  IndexSet box(f.ef(), f.a->bound());
  for (const auto& i : box.items())
    if (f.op(i) * z != expected(i)) return f.ambient(i);
  return std::nullopt;
}

Vector normalize(const HSDerivation& d, const Vector& z) {
  return tower_level(d, static_cast<int>(d.model()->m()) - 1).reduce(z);
}

Vector find_y_in(const Family& f) {
  check_degree(f);
  const ArtinianModel& a = *f.a;
  Subspace c10 = f.C({1, 0});
  Vector y = correct(f, {0, 1}, a.one(), c10, "C_(1,0)");
  std::uint32_t pl = f.p;
  for (unsigned l = 1; l < f.m; ++l, pl *= f.p) {
    Subspace below = f.F(static_cast<int>(l) - 1);
    Vector t = f.op({pl, 0}) * y;
    if (!t.is_zero()) y -= correct(f, {pl, 0}, t, below, level_name(l - 1));
    t = f.op({0, pl}) * y;
    if (!t.is_zero()) {
      Subspace v = below.intersect(f.C({pl, 0}));
      y -= correct(f, {0, pl}, t, v, level_name(l - 1) + " & C_(p^l,0)");
    }
  }
  return y;
}

Vector find_w_in(const Family& f, const FormalGroupLaw& law) {
  check_degree(f);
  // D_(0,p^l)^p = -alpha_l D_(1,0) + (terms vanishing on w) makes the
  // conditions contradictory as soon as one alpha_l is nonzero.
  for (unsigned l = 0; l < f.m; ++l)
    if (!law.alpha(l).is_zero())
      throw Error(ErrorKind::HypothesisFailure, "no w exists: alpha_" + std::to_string(l) + " is nonzero, so " +
                                                    f.name(f.unit(1, static_cast<std::uint32_t>(ipow(f.p, l)))) +
                                                    "^p w = -alpha_" + std::to_string(l));
  const ArtinianModel& a = *f.a;
  Vector w = correct(f, {1, 0}, a.one(), f.U, "the domain");
  Vector t = f.op({0, 1}) * w;
  if (!t.is_zero()) w -= correct(f, {0, 1}, t, f.C({1, 0}), "C_(1,0)");
  std::uint32_t pl = f.p;
  for (unsigned l = 1; l < f.m; ++l, pl *= f.p) {
    Subspace below = f.F(static_cast<int>(l) - 1);
    t = f.op({pl, 0}) * w;
    if (!t.is_zero()) w -= correct(f, {pl, 0}, t, below, level_name(l - 1));
    t = f.op({0, pl}) * w;
    if (!t.is_zero()) w -= correct(f, {0, pl}, t, below.intersect(f.C({pl, 0})), level_name(l - 1) + " & C_(p^l,0)");
  }
  if (f.op({1, 0}) * w != a.one() || !(f.op({0, 1}) * w).is_zero())
    throw Error(ErrorKind::CorrectionUnsolvable, "w lost D_(1,0) w = 1 or D_(0,1) w = 0");
  return w;
}

Vector find_x_in(const Family& f, const FormalGroupLaw& law, const Vector& y) {
  check_degree(f);
  const ArtinianModel& a = *f.a;
  if (auto bad = local_mismatch(f, y, [&](const MultiIndex& i) { return local_y_expected(f, y, i); }))
    throw Error(ErrorKind::HypothesisFailure, "y fails its table at " + index_text(*bad));

  const Vector one = a.one();
  const Matrix& d10 = f.op({1, 0});
  const Matrix& d01 = f.op({0, 1});
  Vector x = correct(f, {1, 0}, one, f.U, "the domain");

  // l = 0
  Fq a0 = law.alpha(0);
  Vector target = a.power(y, f.p - 1) * a0;
  if (!a0.is_zero()) {
    Vector t = target - d01 * x;
    if (!t.is_zero()) {
      if (!(d10 * t).is_zero()) throw Error(ErrorKind::HypothesisFailure, "alpha_0 y^(p-1) - D_(0,1) x is not killed by D_(1,0)");
      Vector z = correct(f, {1, 0}, t, f.U, "the domain");
      x.axpy(-a0.inverse(), apply_times(d01, z, f.p - 1));
    }
  } else {
    Vector t = d01 * x;
    if (!t.is_zero()) x -= correct(f, {0, 1}, t, f.C({1, 0}), "C_(1,0)");
  }
  if (d10 * x != one || d01 * x != target)
    throw Error(ErrorKind::CorrectionUnsolvable, "the alpha_0 correction did not reach D_(1,0) x = 1, D_(0,1) x = alpha_0 y^(p-1)");

  std::uint32_t pl = f.p;
  for (unsigned l = 1; l < f.m; ++l, pl *= f.p) {
    Subspace below = f.F(static_cast<int>(l) - 1);
    const Matrix& dh = f.op({pl, 0});
    const Matrix& dv = f.op({0, pl});
    Vector t = dh * x;
    if (!t.is_zero()) x -= correct(f, {pl, 0}, t, below, level_name(l - 1));

    Fq al = law.alpha(l);
    target = a.power(y, static_cast<std::uint64_t>(f.p - 1) * pl) * al;
    t = target - dv * x;
    if (!t.is_zero()) {
      if (!al.is_zero()) {
        Subspace W = f.C({0, 1}).intersect(f.C({pl, 0}));
        std::uint32_t ql = f.p;
        for (unsigned lp = 1; lp < l; ++lp, ql *= f.p) W = W.intersect(f.C({ql, 0})).intersect(f.C({0, ql}));
        Subspace W0 = W.intersect(f.C({1, 0}));
        if (!W0.contains(t))
          throw Error(ErrorKind::HypothesisFailure, "alpha_l y^((p-1)p^l) - " + f.name({0, pl}) + " x does not lie in W_0");
        // t = D_(1,0)(t w) for any w in W with D_(1,0) w = 1; without such a
        // w (alpha_0 != 0 rules it out) z is solved for directly.
        Vector z;
        bool found = false;
        if (auto wl = solve(d10 * W.inclusion(), one)) {
          z = a.multiply(t, W.inclusion() * *wl);
          found = W.contains(z) && d10 * z == t;
        }
        if (!found) {
          if (auto zc = solve(d10 * W.inclusion(), t)) {
            z = W.inclusion() * *zc;
            found = true;
          }
        }
        if (found) {
          Vector moved = x;
          moved.axpy(-al.inverse(), apply_times(dv, z, f.p - 1));
          found = (dh * moved).is_zero() && dv * moved == target && d10 * moved == one;
          if (found) x = std::move(moved);
        }
        if (!found) {
          // With alpha_0 != 0 the constant 1 is in ker D_(1,0) on W but not in
          // its image; x' is then solved for in F_(l-1) & C_(p^l,0) directly.
          Subspace v = below.intersect(f.C({pl, 0}));
          x += correct(f, {0, pl}, t, v, level_name(l - 1) + " & C_(p^l,0)");
        }
      } else {
        Subspace v = below.intersect(f.C({pl, 0}));
        x -= correct(f, {0, pl}, dv * x, v, level_name(l - 1) + " & C_(p^l,0)");
      }
    }
    if (!(dh * x).is_zero() || dv * x != target)
      throw Error(ErrorKind::CorrectionUnsolvable, "correction at level " + std::to_string(l) + " did not reach its targets");
  }
  return x;
}

Vector one_dim_in(const Family& f, LawKind kind) {
  check_degree(f);
  const ArtinianModel& a = *f.a;
  Vector z;
  if (kind == LawKind::Additive) {
    z = correct(f, {1}, a.one(), f.U, "the domain");
    std::uint32_t pl = f.p;
    for (unsigned l = 1; l < f.m; ++l, pl *= f.p) {
      Vector t = f.op({pl}) * z;
      if (!t.is_zero()) z -= correct(f, {pl}, t, f.F(static_cast<int>(l) - 1), level_name(l - 1));
    }
  } else {
    // u = 1 + z is a unit with D_1 u = u and D_(p^l) u = 0. The constant -1
    // also solves the affine system, so u is taken from the kernel instead.
    Matrix shifted = f.op({1}) - Matrix::identity(a.field(), a.dim());
    std::vector<const Matrix*> blocks{&shifted};
    std::uint32_t pl = f.p;
    for (unsigned l = 1; l < f.m; ++l, pl *= f.p) blocks.push_back(&f.op({pl}));
    Subspace group_like = Subspace::kernel(Matrix::vstack(blocks)).intersect(f.U);
    if (group_like.dim() == 0 || group_like.pivots()[0] != 0)
      throw Error(ErrorKind::CorrectionUnsolvable, "no unit u with D_1 u = u and D_(p^l) u = 0");
    z = group_like.basis().row(0) - a.one();
  }
  return z;
}

Vector local_one_dim_expected(const Family& f, LawKind kind, const Vector& z, const MultiIndex& i) {
  if (i[0] == 0) return z;
  if (i[0] == 1) return kind == LawKind::Additive ? f.a->one() : f.a->one() + z;
  return Vector(f.a->field(), f.a->dim());
}

struct FactorSpec {
  LawKind kind;
  LawPtr law;
  std::vector<unsigned> coords;
};

void flatten(const LawPtr& law, unsigned offset, std::vector<FactorSpec>& out) {
  switch (law->kind()) {
    case LawKind::Product:
      for (const auto& f : law->factors()) {
        flatten(f, offset, out);
        offset += f->e();
      }
      return;
    case LawKind::Additive:
      for (unsigned c = 0; c < law->e(); ++c) out.push_back({LawKind::Additive, law, {offset + c}});
      return;
    case LawKind::Multiplicative:
      out.push_back({LawKind::Multiplicative, law, {offset}});
      return;
    case LawKind::Witt2:
      out.push_back({LawKind::Witt2, law, {offset, offset + 1}});
      return;
    default:
      throw Error(ErrorKind::FactorUnsupported, "no basis finder for a " + to_string(law->kind()) + " factor");
  }
}

[[noreturn]] void table_failure(const std::string& what, const MultiIndex& i) {
  throw Error(ErrorKind::CorrectionUnsolvable, what + " fails its table at " + index_text(i));
}

Vector finish_y(const HSDerivation& d, const Family& f) {
  Vector y = normalize(d, find_y_in(f));
  if (auto bad = local_mismatch(f, y, [&](const MultiIndex& i) { return local_y_expected(f, y, i); }))
    table_failure("y", *bad);
  return y;
}

Vector finish_x(const HSDerivation& d, const Family& f, const FormalGroupLaw& law, const Vector& y) {
  Vector x = normalize(d, find_x_in(f, law, y));
  if (auto bad = local_mismatch(f, x, [&](const MultiIndex& i) { return local_x_expected(f, law, x, y, i); }))
    table_failure("x", *bad);
  return x;
}

Vector finish_one_dim(const HSDerivation& d, const Family& f, LawKind kind) {
  // D_1 z = 1 + z pins z itself, so a multiplicative element is left as found.
  Vector z = one_dim_in(f, kind);
  if (kind == LawKind::Additive) z = normalize(d, z);
  if (auto bad = local_mismatch(f, z, [&](const MultiIndex& i) { return local_one_dim_expected(f, kind, z, i); }))
    table_failure("z", *bad);
  return z;
}

}  // namespace

BasisReport verify_canonical_basis(const HSDerivation& d, const FormalGroupLaw& law, const BasisCandidate& z) {
  const ArtinianModel& a = *d.model();
  if (law.e() != a.e() || law.m() != a.m() || &law.field() != &a.field())
    throw Error(ErrorKind::ContextMismatch, "law and model differ in e, m or field");
  if (z.size() != a.e()) throw Error(ErrorKind::InvalidArgument, "candidate needs exactly e elements");
  for (const auto& v : z)
    if (v.size() != a.dim()) throw Error(ErrorKind::InvalidArgument, "candidate element has the wrong length");

  BasisReport r;
  r.ambient_dim = a.dim();
  const unsigned e = a.e();

  std::map<std::pair<unsigned, std::uint32_t>, Vector> pow_memo;
  auto zpow = [&](unsigned l, std::uint32_t n) -> const Vector& {
    auto key = std::make_pair(l, n);
    auto it = pow_memo.find(key);
    if (it == pow_memo.end()) it = pow_memo.emplace(key, a.power(z[l], n)).first;
    return it->second;
  };

  const IndexSet& idx = a.basis();
  for (unsigned j = 0; j < e; ++j) {
    std::vector<Vector> expected(idx.size(), Vector(a.field(), a.dim()));
    for (const auto& [key, c] : law.components()[j].terms()) {
      Exponents ex = law.layout()->unpack(key);
      Vector mono = a.one();
      for (unsigned l = 0; l < e; ++l)
        if (ex[l]) mono = a.multiply(mono, zpow(l, ex[l]));
      MultiIndex wi(ex.begin() + e, ex.begin() + 2 * e);
      expected[idx.flat(wi)].axpy(c, mono);
    }
    bool ok = true;
    for (std::size_t i = 0; i < idx.size() && ok; ++i) {
      Vector actual = d.component(i) * z[j];
      if (actual != expected[i]) {
        ok = false;
        if (!r.bad_generator) {
          r.bad_generator = j;
          r.first_bad_index = idx[i];
          r.expected = a.format(expected[i]);
          r.actual = a.format(actual);
        }
      }
    }
    r.embedding_ok.push_back(ok);
  }

  Subspace c = constants(d);
  r.constants_dim = c.dim();
  std::uint64_t pe = ipow(a.p(), e);
  r.degree_ok = c.dim() > 0 && a.dim() == pe * c.dim();
  if (pe * c.dim() <= a.dim()) {
    std::vector<Vector> rows;
    IndexSet small(e, a.p());
    for (const auto& ai : small.items()) {
      Vector mono = a.one();
      for (unsigned l = 0; l < e; ++l)
        if (ai[l]) mono = a.multiply(mono, zpow(l, ai[l]));
      for (const auto& cv : c.basis_vectors()) rows.push_back(a.multiply(cv, mono));
    }
    r.independent = rank(Matrix::from_rows(a.field(), a.dim(), rows)) == rows.size();
  }

  r.pass = r.degree_ok && r.independent;
  for (bool ok : r.embedding_ok) r.pass = r.pass && ok;
  return r;
}

Vector find_y(const HSDerivation& d) {
  require_kind(d, LawKind::Witt2);
  return finish_y(d, whole_family(d));
}

Vector find_w(const HSDerivation& d) {
  const FormalGroupLaw& law = require_kind(d, LawKind::Witt2);
  return find_w_in(whole_family(d), law);
}

Vector find_x(const HSDerivation& d, const Vector& y) {
  const FormalGroupLaw& law = require_kind(d, LawKind::Witt2);
  return finish_x(d, whole_family(d), law, y);
}

Vector one_dim_basis(const HSDerivation& d) {
  const FormalGroupLaw& law = d.require_law();
  if (law.e() != 1 || (law.kind() != LawKind::Additive && law.kind() != LawKind::Multiplicative))
    throw Error(ErrorKind::InvalidArgument, "one_dim_basis needs an additive or multiplicative law of dimension 1");
  return finish_one_dim(d, whole_family(d), law.kind());
}

BasisCandidate assemble_product_basis(const HSDerivation& d) {
  const FormalGroupLaw& law = d.require_law();
  std::vector<FactorSpec> specs;
  flatten(d.law(), 0, specs);
  BasisCandidate out(law.e());
  for (const auto& s : specs) {
    Family f = make_family(d, s.coords);
    if (s.kind == LawKind::Witt2) {
      Vector y = finish_y(d, f);
      Vector x = finish_x(d, f, *s.law, y);
      out[s.coords[0]] = std::move(x);
      out[s.coords[1]] = std::move(y);
    } else {
      out[s.coords[0]] = finish_one_dim(d, f, s.kind);
    }
  }
  BasisReport r = verify_canonical_basis(d, law, out);
  if (!r.pass) {
    std::string why = r.bad_generator ? "generator " + std::to_string(*r.bad_generator + 1) + " at " +
                                            index_text(*r.first_bad_index)
                                      : (r.degree_ok ? "elements not independent over the constants" : "degree check");
    throw Error(ErrorKind::AssemblyMismatch, "assembled basis fails verification: " + why);
  }
  return out;
}

BasisCandidate find_canonical_basis(const HSDerivation& d) { return assemble_product_basis(d); }

std::vector<TableEntry> derivation_table(const HSDerivation& d, const Vector& z) {
  std::vector<TableEntry> out;
  const IndexSet& idx = d.indices();
  for (std::size_t i = 0; i < idx.size(); ++i) {
    Vector v = d.component(i) * z;
    if (i == 0 || !v.is_zero()) out.push_back({idx[i], std::move(v)});
  }
  return out;
}

Vector y_table_expected(const HSDerivation& d, const Vector& y, const MultiIndex& i) {
  require_kind(d, LawKind::Witt2);
  return local_y_expected(whole_family(d), y, i);
}

Vector x_table_expected(const HSDerivation& d, const FormalGroupLaw& law, const Vector& x, const Vector& y,
                        const MultiIndex& i) {
  return local_x_expected(whole_family(d), law, x, y, i);
}

std::optional<MultiIndex> y_table_mismatch(const HSDerivation& d, const Vector& y) {
  require_kind(d, LawKind::Witt2);
  Family f = whole_family(d);
  return local_mismatch(f, y, [&](const MultiIndex& i) { return local_y_expected(f, y, i); });
}

std::optional<MultiIndex> x_table_mismatch(const HSDerivation& d, const Vector& x, const Vector& y) {
  const FormalGroupLaw& law = require_kind(d, LawKind::Witt2);
  Family f = whole_family(d);
  return local_mismatch(f, x, [&](const MultiIndex& i) { return local_x_expected(f, law, x, y, i); });
}

}  // namespace hsd
