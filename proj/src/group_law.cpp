#include "hsd/group_law.hpp"

#include "hsd/poly_text.hpp"

namespace hsd {

namespace {

// Q with Q(s^p) = f; FractionalExponent if f is not a series in s^p.
Poly contract_exponents(const Poly& f) {
  const RingLayout& l = *f.layout();
  std::vector<Poly::Term> out;
  Exponents e(l.nvars());
  for (const auto& [key, c] : f.terms()) {
    const std::uint32_t p = c.field().p();
    for (std::size_t v = 0; v < l.nvars(); ++v) {
      std::uint32_t x = l.exponent(key, v);
      if (x % p != 0) throw Error(ErrorKind::FractionalExponent, "exponent of " + l.var_name(v) + " not divisible by p");
      e[v] = x / p;
    }
    out.emplace_back(l.pack(e), c);
  }
  return Poly::from_terms(f.layout(), f.one(), std::move(out));
}

std::uint32_t power_of(std::uint32_t p, unsigned m) {
  std::uint64_t b = 1;
  for (unsigned i = 0; i < m; ++i) {
    b *= p;
    if (b > (1u << 20)) throw Error(ErrorKind::ResourceLimit, "truncation bound too large");
  }
  return static_cast<std::uint32_t>(b);
}

LayoutPtr vw_layout(unsigned e, std::uint32_t bound) {
  return RingLayout::make({{"v", e, bound}, {"w", e, bound}});
}

// Builds P^k for every k of the index set from the component list.
std::vector<Poly> power_table(const IndexSet& idx, const std::vector<Poly>& comps, const LayoutPtr& layout,
                              const Field& field) {
  std::vector<Poly> out;
  out.reserve(idx.size());
  for (std::size_t f = 0; f < idx.size(); ++f) {
    const MultiIndex& k = idx[f];
    std::size_t last = k.size();
    for (std::size_t c = k.size(); c-- > 0;) {
      if (k[c]) {
        last = c;
        break;
      }
    }
    if (last == k.size()) {
      out.push_back(constant_poly(layout, field.one()));
      continue;
    }
    MultiIndex prev = k;
    --prev[last];
    // prev has smaller degree, so it comes earlier in the enumeration
    out.push_back(out[idx.flat(prev)] * comps[last]);
  }
  return out;
}

bool equals_variable(const Poly& f, const LayoutPtr& layout, std::size_t var) {
  return f == variable_poly(layout, f.one().field(), var);
}

}  // namespace

std::string to_string(LawKind kind) {
  switch (kind) {
    case LawKind::Additive: return "additive";
    case LawKind::Multiplicative: return "multiplicative";
    case LawKind::Witt2: return "witt2";
    case LawKind::Product: return "product";
    case LawKind::Custom: return "custom";
  }
  return "unknown";
}

FormalGroupLaw::FormalGroupLaw(LawKind kind, const Field& field, unsigned e, unsigned m, std::vector<Poly> components,
                               bool weak)
    : kind_(kind),
      field_(&field),
      e_(e),
      m_(m),
      bound_(power_of(field.p(), m)),
      weak_(weak),
      layout_(vw_layout(e, bound_)),
      v_layout_(RingLayout::make({{"v", e, bound_}})),
      indices_(e, bound_) {
  if (e == 0) throw Error(ErrorKind::InvalidArgument, "a law needs at least one component");
  if (m == 0) throw Error(ErrorKind::InvalidArgument, "truncation level must be at least 1");
  if (components.size() != e) throw Error(ErrorKind::InvalidArgument, "law needs exactly e components");
  for (auto& c : components) {
    if (!c.layout()->same_as(*layout_)) throw Error(ErrorKind::ContextMismatch, "law component in the wrong ring");
    if (&c.one().field() != field_) throw Error(ErrorKind::ContextMismatch, "law component over another field");
    components_.push_back(remap_by_name(c, layout_));
  }
  axioms_ = check_axioms(layout_, components_);
  if (!axioms_.unit_left || !axioms_.unit_right)
    throw Error(ErrorKind::LawAxiomViolation, "unit axiom fails: F(v,0) = v and F(0,w) = w are required");
  if (!weak_ && !axioms_.associative) throw Error(ErrorKind::LawAxiomViolation, "associativity fails");
}

LawPtr FormalGroupLaw::additive(const Field& field, unsigned e, unsigned m) {
  const LayoutPtr l = vw_layout(e, power_of(field.p(), m));
  std::vector<Poly> comps;
  for (unsigned j = 0; j < e; ++j) comps.push_back(variable_poly(l, field, j) + variable_poly(l, field, e + j));
  return LawPtr(new FormalGroupLaw(LawKind::Additive, field, e, m, std::move(comps), false));
}

LawPtr FormalGroupLaw::multiplicative(const Field& field, unsigned m) {
  const LayoutPtr l = vw_layout(1, power_of(field.p(), m));
  Poly v = variable_poly(l, field, 0), w = variable_poly(l, field, 1);
  return LawPtr(new FormalGroupLaw(LawKind::Multiplicative, field, 1, m, {v + w + v * w}, false));
}

LawPtr FormalGroupLaw::witt2(const Field& field, unsigned m, std::vector<Fq> alphas) {
  for (auto& a : alphas) {
    if (&a.field() != &field) throw Error(ErrorKind::ContextMismatch, "alpha over another field");
  }
  const std::uint32_t p = field.p();
  const std::uint32_t bound = power_of(p, m);
  const LayoutPtr l = vw_layout(2, bound);
  Poly c1 = variable_poly(l, field, 0) + variable_poly(l, field, 2);
  Poly c2 = variable_poly(l, field, 1) + variable_poly(l, field, 3);
  const auto lambda = lambda_coeffs(p);
  const long long top = std::min<long long>(static_cast<long long>(alphas.size()) - 1, static_cast<long long>(m) - 1);
  std::uint32_t pn = 1;
  for (long long n = 0; n <= top; ++n, pn *= p) {
    if (alphas[n].is_zero()) continue;
    for (std::uint32_t i = 1; i < p; ++i) {
      c1.add_term({0, i * pn, 0, (p - i) * pn}, alphas[n] * field.from_int(lambda[i - 1]));
    }
  }
  auto law = new FormalGroupLaw(LawKind::Witt2, field, 2, m, {c1, c2}, false);
  law->alphas_ = std::move(alphas);
  return LawPtr(law);
}

LawPtr FormalGroupLaw::product(std::vector<LawPtr> factors) {
  if (factors.size() < 2) throw Error(ErrorKind::InvalidArgument, "a product needs at least two factors");
  const Field& field = factors[0]->field();
  const unsigned m = factors[0]->m();
  unsigned e = 0;
  for (auto& f : factors) {
    if (&f->field() != &field || f->m() != m) throw Error(ErrorKind::ContextMismatch, "factors differ in field or level");
    e += f->e();
  }
  const LayoutPtr l = vw_layout(e, power_of(field.p(), m));
  std::vector<Poly> comps;
  unsigned offset = 0;
  bool weak = false;
  for (auto& f : factors) {
    std::vector<std::optional<std::size_t>> map(2 * f->e());
    for (unsigned j = 0; j < f->e(); ++j) {
      map[j] = offset + j;
      map[f->e() + j] = e + offset + j;
    }
    for (auto& c : f->components()) comps.push_back(remap(c, l, map));
    offset += f->e();
    weak = weak || f->weak();
  }
  auto law = new FormalGroupLaw(LawKind::Product, field, e, m, std::move(comps), weak);
  law->factors_ = std::move(factors);
  return LawPtr(law);
}

LawPtr FormalGroupLaw::custom(const Field& field, unsigned e, unsigned m, std::vector<Poly> components, bool weak) {
  return LawPtr(new FormalGroupLaw(LawKind::Custom, field, e, m, std::move(components), weak));
}

LawPtr FormalGroupLaw::custom(const Field& field, unsigned e, unsigned m, const std::vector<std::string>& components,
                              bool weak) {
  const LayoutPtr l = vw_layout(e, power_of(field.p(), m));
  std::vector<Poly> comps;
  for (auto& text : components) comps.push_back(parse_poly(text, field, l));
  return custom(field, e, m, std::move(comps), weak);
}

Fq FormalGroupLaw::alpha(unsigned l) const {
  if (kind_ != LawKind::Witt2) throw Error(ErrorKind::InvalidArgument, "alpha of a non-witt2 law");
  if (static_cast<int>(l) > top_alpha()) return field_->zero();
  return alphas_[l];
}

int FormalGroupLaw::top_alpha() const noexcept {
  return static_cast<int>(std::min<long long>(static_cast<long long>(alphas_.size()) - 1, static_cast<long long>(m_) - 1));
}

const std::vector<Poly>& FormalGroupLaw::powers() const {
  std::call_once(powers_once_, [&] { powers_ = power_table(indices_, components_, layout_, *field_); });
  return powers_;
}

const std::vector<std::pair<std::size_t, Fq>>& FormalGroupLaw::structure_constants(std::size_t i, std::size_t j) const {
  std::call_once(table_once_, [&] {
    const auto& pw = powers();
    const std::size_t n = indices_.size();
    table_.assign(n * n, {});
    MultiIndex vi(e_), wj(e_);
    for (std::size_t k = 0; k < n; ++k) {
      for (const auto& [key, c] : pw[k].terms()) {
        for (unsigned a = 0; a < e_; ++a) {
          vi[a] = layout_->exponent(key, a);
          wj[a] = layout_->exponent(key, e_ + a);
        }
        table_[indices_.flat(vi) * n + indices_.flat(wj)].emplace_back(k, c);
      }
    }
  });
  const std::size_t n = indices_.size();
  if (i >= n || j >= n) throw Error(ErrorKind::IndexRange, "structure constant index out of range");
  return table_[i * n + j];
}

std::vector<std::pair<std::size_t, Fq>> FormalGroupLaw::structure_constants(const MultiIndex& i,
                                                                            const MultiIndex& j) const {
  return structure_constants(indices_.flat(i), indices_.flat(j));
}

const std::vector<Poly>& FormalGroupLaw::p_root() const {
  if (!axioms_.commutative)
    throw Error(ErrorKind::RequiresCommutative, "the p-fold composition formula needs a commutative law");
  std::call_once(root_once_, [&] {
    const std::uint32_t p = field_->p();
    IteratedLaw it = iterated_law(*this, p);
    // Every block collapses onto one variable; p^{m+1} leaves room for the
    // full diagonal exponent p*(p^m - 1).
    const LayoutPtr s = RingLayout::make({{"s", e_, power_of(p, m_ + 1)}});
    std::vector<std::optional<std::size_t>> collapse(it.layout->nvars());
    for (std::size_t v = 0; v < collapse.size(); ++v) collapse[v] = v % e_;
    std::vector<std::optional<std::size_t>> to_v(e_);
    for (unsigned j = 0; j < e_; ++j) to_v[j] = j;
    std::vector<Poly> root;
    for (const auto& c : it.components) root.push_back(remap(contract_exponents(remap(c, s, collapse)), v_layout_, to_v));
    root_ = std::move(root);
  });
  return root_;
}

const std::vector<std::vector<std::pair<std::size_t, Fq>>>& FormalGroupLaw::evp_coefficients() const {
  const auto& root = p_root();
  std::call_once(evp_once_, [&] {
    auto pw = power_table(indices_, root, v_layout_, *field_);
    evp_.assign(indices_.size(), {});
    for (std::size_t k = 0; k < pw.size(); ++k) {
      for (const auto& [key, c] : pw[k].terms()) evp_[indices_.flat(v_layout_->unpack(key))].emplace_back(k, c);
    }
  });
  return evp_;
}

LawAxiomsReport check_axioms(const FormalGroupLaw& law) { return check_axioms(law.layout(), law.components()); }

LawAxiomsReport check_axioms(const LayoutPtr& layout, const std::vector<Poly>& comps) {
  LawAxiomsReport r;
  const std::size_t e = comps.size();
  if (e == 0) return r;
  const Field& field = comps[0].one().field();
  const std::uint32_t bound = layout->bound(0);

  // F(v, 0) = v and F(0, w) = w
  r.unit_right = r.unit_left = true;
  const LayoutPtr vl = RingLayout::make({{"v", static_cast<unsigned>(e), bound}});
  const LayoutPtr wl = RingLayout::make({{"w", static_cast<unsigned>(e), bound}});
  for (std::size_t j = 0; j < e; ++j) {
    std::vector<Poly::Term> only_v, only_w;
    for (const auto& [key, c] : comps[j].terms()) {
      bool has_v = false, has_w = false;
      for (std::size_t a = 0; a < e; ++a) {
        has_v = has_v || layout->exponent(key, a) != 0;
        has_w = has_w || layout->exponent(key, e + a) != 0;
      }
      if (!has_w) only_v.emplace_back(key, c);
      if (!has_v) only_w.emplace_back(key, c);
    }
    Poly fv = remap_by_name(Poly::from_terms(layout, field.one(), only_v), vl);
    Poly fw = remap_by_name(Poly::from_terms(layout, field.one(), only_w), wl);
    r.unit_right = r.unit_right && equals_variable(fv, vl, j);
    r.unit_left = r.unit_left && equals_variable(fw, wl, j);
  }

  // F(F(u,v), w) = F(u, F(v,w)) in k[u,v,w]
  const LayoutPtr t = RingLayout::make({{"u", static_cast<unsigned>(e), bound},
                                        {"v", static_cast<unsigned>(e), bound},
                                        {"w", static_cast<unsigned>(e), bound}});
  std::vector<std::optional<std::size_t>> uv(2 * e), vw(2 * e);
  for (std::size_t a = 0; a < e; ++a) {
    uv[a] = a;
    uv[e + a] = e + a;
    vw[a] = e + a;
    vw[e + a] = 2 * e + a;
  }
  std::map<std::string, Poly> left_img, right_img;
  for (std::size_t a = 0; a < e; ++a) {
    left_img.emplace(layout->var_name(a), remap(comps[a], t, uv));
    right_img.emplace(layout->var_name(a), variable_poly(t, field, a));
    right_img.emplace(layout->var_name(e + a), remap(comps[a], t, vw));
  }
  r.associative = true;
  for (std::size_t j = 0; j < e && r.associative; ++j) {
    Poly lhs = substitute(comps[j], left_img, t);
    Poly rhs = substitute(comps[j], right_img, t);
    r.associative = lhs == rhs;
  }

  std::vector<std::optional<std::size_t>> swap(2 * e);
  for (std::size_t a = 0; a < e; ++a) {
    swap[a] = e + a;
    swap[e + a] = a;
  }
  r.commutative = true;
  for (std::size_t j = 0; j < e && r.commutative; ++j) r.commutative = remap(comps[j], layout, swap) == comps[j];
  return r;
}

MultiPoly h_n(std::uint32_t p, unsigned n) {
  const Field& k = Field::get(p);
  MultiPoly out(k, make_vars({"x", "y"}));
  const auto lambda = lambda_coeffs(p);
  std::uint64_t pn = 1;
  for (unsigned i = 0; i < n; ++i) {
    pn *= p;
    if (pn > (1u << 24)) throw Error(ErrorKind::ResourceLimit, "H_n exponent too large");
  }
  for (std::uint32_t i = 1; i < p; ++i) {
    out.add_term({static_cast<std::uint32_t>(i * pn), static_cast<std::uint32_t>((p - i) * pn)},
                 k.from_int(lambda[i - 1]));
  }
  return out;
}

std::vector<Poly> n_series(const FormalGroupLaw& law, unsigned n) {
  const LayoutPtr& vl = law.v_layout();
  std::vector<Poly> cur(law.e(), zero_poly(vl, law.field()));
  for (unsigned step = 0; step < n; ++step) {
    std::map<std::string, Poly> img;
    for (unsigned a = 0; a < law.e(); ++a) img.emplace(law.layout()->var_name(law.e() + a), cur[a]);
    std::vector<Poly> next;
    for (const auto& c : law.components()) next.push_back(substitute(c, img, vl));
    cur = std::move(next);
  }
  return cur;
}

IteratedLaw iterated_law(const FormalGroupLaw& law, unsigned n) {
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "iterated law needs at least one argument");
  const unsigned e = law.e();
  auto layout_for = [&](unsigned blocks) {
    std::vector<Block> bl;
    for (unsigned b = 1; b <= blocks; ++b) bl.push_back({"v" + std::to_string(b), e, law.bound()});
    return RingLayout::make(std::move(bl));
  };
  IteratedLaw it{layout_for(1), {}};
  for (unsigned a = 0; a < e; ++a) it.components.push_back(variable_poly(it.layout, law.field(), a));
  for (unsigned blocks = 1; blocks < n; ++blocks) {
    const LayoutPtr next = layout_for(blocks + 1);
    // block `blocks` becomes F(v_blocks, v_{blocks+1})
    std::vector<std::optional<std::size_t>> map(2 * e);
    for (unsigned a = 0; a < e; ++a) {
      map[a] = (blocks - 1) * e + a;
      map[e + a] = blocks * e + a;
    }
    std::map<std::string, Poly> img;
    for (unsigned a = 0; a < e; ++a)
      img.emplace(it.layout->var_name((blocks - 1) * e + a), remap(law.components()[a], next, map));
    std::vector<Poly> comps;
    for (const auto& c : it.components) comps.push_back(substitute(c, img, next));
    it = IteratedLaw{next, std::move(comps)};
  }
  return it;
}

LawPtr truncate_law(const LawPtr& law, unsigned m_prime) {
  if (m_prime == 0 || m_prime > law->m())
    throw Error(ErrorKind::TruncationOrder, "cannot read a level " + std::to_string(law->m()) + " law at level " +
                                                std::to_string(m_prime));
  if (m_prime == law->m()) return law;
  const Field& k = law->field();
  switch (law->kind()) {
    case LawKind::Additive: return FormalGroupLaw::additive(k, law->e(), m_prime);
    case LawKind::Multiplicative: return FormalGroupLaw::multiplicative(k, m_prime);
    case LawKind::Witt2: return FormalGroupLaw::witt2(k, m_prime, law->alphas());
    case LawKind::Product: {
      std::vector<LawPtr> factors;
      for (auto& f : law->factors()) factors.push_back(truncate_law(f, m_prime));
      return FormalGroupLaw::product(std::move(factors));
    }
    case LawKind::Custom: {
      const LayoutPtr l = vw_layout(law->e(), power_of(k.p(), m_prime));
      std::vector<Poly> comps;
      for (auto& c : law->components()) comps.push_back(remap_by_name(c, l));
      return FormalGroupLaw::custom(k, law->e(), m_prime, std::move(comps), law->weak());
    }
  }
  throw Error(ErrorKind::InvalidArgument, "unknown law kind");
}

}  // namespace hsd
