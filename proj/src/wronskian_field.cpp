#include "hsd/wronskian_field.hpp"

#include <map>

#include "hsd/index_set.hpp"
#include "hsd/poly_text.hpp"

namespace hsd {

namespace {

using PolyMatrix = std::vector<std::vector<MultiPoly>>;

MultiPoly poly_one(const Field& k, const VarList& vars) { return MultiPoly::constant(k, vars, k.one()); }

bool same_vars(const VarList& a, const VarList& b) { return a == b || *a == *b; }

MultiPoly exact_quotient(const MultiPoly& a, const MultiPoly& b) {
  auto q = a.divide_exact(b);
  if (!q) throw Error(ErrorKind::InvalidArgument, "inexact division during fraction-free elimination");
  return *q;
}

struct Elimination {
  std::vector<std::size_t> pivot_cols;
  std::vector<std::size_t> rows;  // original row index at each position after swaps
  std::size_t first_free = 0;     // first column without a pivot, or the column count
  bool swaps_odd = false;
};

/// Bareiss elimination in place. Entries below the pivots become zero and
/// every division is exact. With stop_at_free the sweep ends at the first
/// column without a pivot.
Elimination bareiss(PolyMatrix& a, std::size_t cols, bool stop_at_free) {
  Elimination el;
  el.first_free = cols;
  const std::size_t rows = a.size();
  for (std::size_t r = 0; r < rows; ++r) el.rows.push_back(r);
  if (rows == 0) {
    el.first_free = 0;
    return el;
  }
  const Field& k = a[0][0].field();
  MultiPoly prev = poly_one(k, a[0][0].vars());
  std::size_t row = 0;
  for (std::size_t c = 0; c < cols && row < rows; ++c) {
    std::size_t piv = row;
    while (piv < rows && a[piv][c].is_zero()) ++piv;
    if (piv == rows) {
      if (el.first_free == cols) el.first_free = c;
      if (stop_at_free) return el;
      continue;
    }
    if (piv != row) {
      std::swap(a[piv], a[row]);
      std::swap(el.rows[piv], el.rows[row]);
      el.swaps_odd = !el.swaps_odd;
    }
    for (std::size_t i = row + 1; i < rows; ++i) {
      for (std::size_t j = c + 1; j < cols; ++j)
        a[i][j] = exact_quotient(a[row][c] * a[i][j] - a[i][c] * a[row][j], prev);
      a[i][c] = MultiPoly(k, a[i][c].vars());
    }
    prev = a[row][c];
    el.pivot_cols.push_back(c);
    ++row;
  }
  // rows ran out before the columns did
  if (el.first_free == cols && el.pivot_cols.size() < cols) el.first_free = el.pivot_cols.back() + 1;
  return el;
}

MultiPoly determinant(PolyMatrix a) {
  const std::size_t n = a.size();
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "determinant of an empty matrix");
  Elimination el = bareiss(a, n, false);
  if (el.pivot_cols.size() < n) return MultiPoly(a[0][0].field(), a[0][0].vars());
  return el.swaps_odd ? -a[n - 1][n - 1] : a[n - 1][n - 1];
}

/// Multiplies every column by a common multiple of its denominators.
PolyMatrix clear_denominators(const RatMatrix& m, std::vector<MultiPoly>& multipliers) {
  PolyMatrix out(m.size());
  if (m.empty()) return out;
  const std::size_t cols = m[0].size();
  for (auto& row : out) row.reserve(cols);
  multipliers.clear();
  for (std::size_t c = 0; c < cols; ++c) {
    MultiPoly l = m[0][c].den();
    for (std::size_t r = 1; r < m.size(); ++r) {
      const MultiPoly& d = m[r][c].den();
      if (l.divide_exact(d)) continue;
      if (d.divide_exact(l)) {
        l = d;
        continue;
      }
      l = l * d;
    }
    for (std::size_t r = 0; r < m.size(); ++r) out[r].push_back(m[r][c].num() * exact_quotient(l, m[r][c].den()));
    multipliers.push_back(std::move(l));
  }
  return out;
}

void check_shape(const RatMatrix& m) {
  for (const auto& row : m)
    if (row.size() != m[0].size()) throw Error(ErrorKind::InvalidArgument, "ragged matrix");
}

}  // namespace

FieldDerivationContext::FieldDerivationContext(LawPtr law) : law_(std::move(law)) {
  if (!law_) throw Error(ErrorKind::InvalidArgument, "no law");
  const unsigned e = law_->e();
  vars_ = numbered_vars("x", e);
  const Field& k = law_->field();
  IndexSet full(e, law_->bound());
  images_.assign(e, std::vector<MultiPoly>(full.size(), MultiPoly(k, vars_)));
  for (unsigned j = 0; j < e; ++j) {
    for (const auto& [key, c] : law_->components()[j].terms()) {
      Exponents ex = law_->layout()->unpack(key);
      Exponents a(ex.begin(), ex.begin() + e);
      MultiIndex i(ex.begin() + e, ex.begin() + 2 * e);
      MultiPoly mono(k, vars_);
      mono.add_term(a, c);
      images_[j][full.flat(i)] += mono;
    }
  }
}

RationalFunc FieldDerivationContext::parse(const std::string& text) const { return parse_ratfunc(text, field(), vars_); }

std::vector<MultiPoly> FieldDerivationContext::apply(const MultiPoly& f, std::uint32_t bound) const {
  if (!same_vars(f.vars(), vars_)) throw Error(ErrorKind::ContextMismatch, "element over different variables");
  if (bound == 0 || bound > law_->bound()) throw Error(ErrorKind::TruncationOrder, "bound exceeds p^m");
  const unsigned e = this->e();
  const Field& k = field();
  IndexSet idx(e, bound);
  IndexSet full(e, law_->bound());
  using Series = std::vector<MultiPoly>;
  const Series zero(idx.size(), MultiPoly(k, vars_));

  // (i, j, flat of i + j) for every pair staying inside the box
  std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < idx.size(); ++i)
    for (std::size_t j = 0; j < idx.size(); ++j) {
      MultiIndex s = idx[i];
      bool inside = true;
      for (unsigned l = 0; l < e; ++l) {
        s[l] += idx[j][l];
        inside = inside && s[l] < bound;
      }
      if (inside) pairs.emplace_back(i, j, idx.flat(s));
    }
  auto mul = [&](const Series& a, const Series& b) {
    Series out = zero;
    for (const auto& [i, j, s] : pairs)
      if (!a[i].is_zero() && !b[j].is_zero()) out[s] += a[i] * b[j];
    return out;
  };

  std::vector<std::vector<Series>> powers(e);
  for (unsigned j = 0; j < e; ++j) {
    Series g = zero;
    for (std::size_t i = 0; i < idx.size(); ++i) g[i] = images_[j][full.flat(idx[i])];
    Series one = zero;
    one[0] = poly_one(k, vars_);
    powers[j].push_back(std::move(one));
    powers[j].push_back(std::move(g));
  }
  auto power = [&](unsigned j, std::uint32_t n) -> const Series& {
    while (powers[j].size() <= n) powers[j].push_back(mul(powers[j].back(), powers[j][1]));
    return powers[j][n];
  };

  Series out = zero;
  for (const auto& [a, c] : f.terms()) {
    Series t = zero;
    t[0] = MultiPoly::constant(k, vars_, c);
    for (unsigned j = 0; j < e; ++j)
      if (a[j]) t = mul(t, power(j, a[j]));
    for (std::size_t i = 0; i < idx.size(); ++i) out[i] += t[i];
  }
  return out;
}

std::vector<RationalFunc> FieldDerivationContext::apply(const RationalFunc& f, std::uint32_t bound) const {
  std::vector<MultiPoly> num = apply(f.num(), bound);
  std::vector<RationalFunc> out;
  out.reserve(num.size());
  if (f.is_polynomial()) {
    for (auto& n : num) out.emplace_back(std::move(n));
    return out;
  }
  // D(f) D(den) = D(num), solved degree by degree
  std::vector<MultiPoly> den = apply(f.den(), bound);
  IndexSet idx(e(), bound);
  out.push_back(f);
  for (std::size_t k = 1; k < idx.size(); ++k) {
    RationalFunc acc(num[k]);
    for (std::size_t j = 1; j <= k; ++j) {
      if (den[j].is_zero()) continue;
      MultiIndex rest = idx[k];
      bool below = true;
      for (unsigned l = 0; l < e() && below; ++l) {
        below = idx[j][l] <= rest[l];
        if (below) rest[l] -= idx[j][l];
      }
      if (!below) continue;
      acc -= RationalFunc(den[j]) * out[idx.flat(rest)];
    }
    out.push_back(acc * RationalFunc(poly_one(field(), vars_), f.den()));
  }
  return out;
}

RatMatrix wronskian_matrix(const FieldDerivationContext& ctx, const std::vector<RationalFunc>& elements) {
  if (elements.empty()) throw Error(ErrorKind::InvalidArgument, "no elements");
  IndexSet idx(ctx.e(), ctx.p());
  RatMatrix out(idx.size());
  for (const auto& f : elements) {
    auto col = ctx.apply(f, ctx.p());
    for (std::size_t i = 0; i < idx.size(); ++i) out[i].push_back(std::move(col[i]));
  }
  return out;
}

std::size_t rank_over_field(const RatMatrix& m) {
  if (m.empty() || m[0].empty()) return 0;
  check_shape(m);
  std::vector<MultiPoly> mult;
  PolyMatrix a = clear_denominators(m, mult);
  return bareiss(a, m[0].size(), false).pivot_cols.size();
}

DependenceResult dependence_test(const FieldDerivationContext& ctx, const std::vector<RationalFunc>& elements) {
  RatMatrix w = wronskian_matrix(ctx, elements);
  const std::size_t n = elements.size();
  std::vector<MultiPoly> mult;
  PolyMatrix scaled = clear_denominators(w, mult);
  PolyMatrix a = scaled;
  DependenceResult res;
  res.rank = bareiss(a, n, false).pivot_cols.size();
  res.dependent = res.rank < n;
  if (!res.dependent) return res;

  // The first j columns are independent and the first j+1 are not, so the
  // kernel on that prefix is one-dimensional; Cramer's rule on j pivot rows.
  a = scaled;
  Elimination el = bareiss(a, n, true);
  const std::size_t j = el.first_free;
  const Field& k = ctx.field();
  const VarList& vars = ctx.vars();
  std::vector<MultiPoly> u(n, MultiPoly(k, vars));
  auto minor = [&](std::optional<std::size_t> replaced) {
    PolyMatrix sub(j);
    for (std::size_t r = 0; r < j; ++r)
      for (std::size_t c = 0; c < j; ++c) sub[r].push_back(scaled[el.rows[r]][replaced && *replaced == c ? j : c]);
    return determinant(std::move(sub));
  };
  u[j] = j == 0 ? poly_one(k, vars) : minor(std::nullopt);
  for (std::size_t c = 0; c < j; ++c) u[c] = -minor(c);
  for (std::size_t c = 0; c <= j; ++c) u[c] = u[c] * mult[c];
  RationalFunc scale = -RationalFunc(u[j]).inverse();
  for (std::size_t c = 0; c < n; ++c) res.witness.push_back(RationalFunc(u[c]) * scale);
  return res;
}

bool p_independence_test(const std::vector<RationalFunc>& elements) {
  if (elements.empty()) return true;
  const Field& k = elements[0].field();
  const VarList& vars = elements[0].vars();
  const unsigned e = static_cast<unsigned>(vars->size());
  const std::size_t n = elements.size();
  if (n > e) throw Error(ErrorKind::TooManyElements, std::to_string(n) + " elements for " + std::to_string(e) + " variables");
  FieldDerivationContext ctx(FormalGroupLaw::additive(k, e, 1));
  std::vector<RationalFunc> family;
  for (const auto& f : elements)
    if (!same_vars(f.vars(), ctx.vars())) throw Error(ErrorKind::ContextMismatch, "elements must use x1..xe");
  IndexSet box(static_cast<unsigned>(n), k.p());
  for (const auto& a : box.items()) {
    RationalFunc mono = RationalFunc::one(k, ctx.vars());
    for (std::size_t l = 0; l < n; ++l)
      for (std::uint32_t t = 0; t < a[l]; ++t) mono *= elements[l];
    family.push_back(std::move(mono));
  }
  return rank_over_field(wronskian_matrix(ctx, family)) == family.size();
}

}  // namespace hsd
