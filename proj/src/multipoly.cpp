#include "hsd/multipoly.hpp"

#include <algorithm>

namespace hsd {

std::uint64_t total_degree(const Exponents& e) noexcept {
  std::uint64_t s = 0;
  for (auto x : e) s += x;
  return s;
}

bool GrlexLess::operator()(const Exponents& a, const Exponents& b) const noexcept {
  auto da = total_degree(a), db = total_degree(b);
  if (da != db) return da < db;
  return a < b;
}

bool display_less(const Exponents& a, const Exponents& b) noexcept {
  auto da = total_degree(a), db = total_degree(b);
  if (da != db) return da < db;
  return b < a;
}

VarList make_vars(std::vector<std::string> names) {
  return std::make_shared<const std::vector<std::string>>(std::move(names));
}

VarList numbered_vars(const std::string& prefix, unsigned n) {
  std::vector<std::string> names;
  for (unsigned i = 1; i <= n; ++i) names.push_back(prefix + std::to_string(i));
  return make_vars(std::move(names));
}

MultiPoly::MultiPoly(const Field& field, VarList vars) : field_(&field), vars_(std::move(vars)) {}

MultiPoly MultiPoly::constant(const Field& field, VarList vars, Fq value) {
  MultiPoly out(field, vars);
  out.add_term(Exponents(out.nvars(), 0), value);
  return out;
}

MultiPoly MultiPoly::variable(const Field& field, VarList vars, std::size_t index) {
  MultiPoly out(field, vars);
  if (index >= out.nvars()) throw Error(ErrorKind::UnknownVariable, "variable index out of range");
  Exponents e(out.nvars(), 0);
  e[index] = 1;
  out.add_term(e, field.one());
  return out;
}

bool MultiPoly::is_constant() const noexcept {
  return terms_.empty() || (terms_.size() == 1 && ::hsd::total_degree(terms_.begin()->first) == 0);
}

Fq MultiPoly::constant_term() const { return coefficient(Exponents(nvars(), 0)); }

Fq MultiPoly::coefficient(const Exponents& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? field_->zero() : it->second;
}

void MultiPoly::add_term(const Exponents& e, Fq c) {
  if (e.size() != nvars()) throw Error(ErrorKind::InvalidArgument, "exponent vector has wrong length");
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

const std::pair<const Exponents, Fq>& MultiPoly::leading_term() const {
  if (terms_.empty()) throw Error(ErrorKind::InvalidArgument, "zero polynomial has no leading term");
  return *terms_.rbegin();
}

std::uint64_t MultiPoly::total_degree() const noexcept {
  return terms_.empty() ? 0 : ::hsd::total_degree(terms_.rbegin()->first);
}

std::uint32_t MultiPoly::degree_in(std::size_t var) const noexcept {
  std::uint32_t d = 0;
  for (auto& [e, c] : terms_) d = std::max(d, e[var]);
  return d;
}

bool MultiPoly::compatible(const MultiPoly& o) const noexcept {
  return field_ == o.field_ && (vars_ == o.vars_ || *vars_ == *o.vars_);
}

void MultiPoly::check(const MultiPoly& o) const {
  if (!compatible(o)) throw Error(ErrorKind::ContextMismatch, "polynomials over different rings");
}

MultiPoly& MultiPoly::operator+=(const MultiPoly& o) {
  check(o);
  for (auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

MultiPoly& MultiPoly::operator-=(const MultiPoly& o) {
  check(o);
  for (auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

MultiPoly MultiPoly::operator-() const {
  MultiPoly out(*this);
  for (auto& [e, c] : out.terms_) c = -c;
  return out;
}

MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
  a.check(b);
  MultiPoly out(*a.field_, a.vars_);
  Exponents e(a.nvars());
  for (auto& [ea, ca] : a.terms_) {
    for (auto& [eb, cb] : b.terms_) {
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      out.add_term(e, ca * cb);
    }
  }
  return out;
}

MultiPoly operator*(MultiPoly a, Fq c) {
  if (c.is_zero()) {
    a.terms_.clear();
    return a;
  }
  for (auto& [e, x] : a.terms_) x *= c;
  return a;
}

MultiPoly MultiPoly::pow(std::uint64_t n) const {
  MultiPoly result = constant(*field_, vars_, field_->one());
  MultiPoly base = *this;
  while (n) {
    if (n & 1) result = result * base;
    n >>= 1;
    if (n) base = base * base;
  }
  return result;
}

MultiPoly MultiPoly::shifted(const Exponents& s) const {
  MultiPoly out(*field_, vars_);
  for (auto& [e, c] : terms_) {
    Exponents f = e;
    for (std::size_t i = 0; i < f.size(); ++i) f[i] += s[i];
    out.terms_.emplace_hint(out.terms_.end(), std::move(f), c);
  }
  return out;
}

MultiPoly MultiPoly::unshifted(const Exponents& s) const {
  MultiPoly out(*field_, vars_);
  for (auto& [e, c] : terms_) {
    Exponents f = e;
    for (std::size_t i = 0; i < f.size(); ++i) {
      if (f[i] < s[i]) throw Error(ErrorKind::InvalidArgument, "monomial does not divide polynomial");
      f[i] -= s[i];
    }
    out.terms_.emplace_hint(out.terms_.end(), std::move(f), c);
  }
  return out;
}

Exponents MultiPoly::monomial_content() const {
  if (terms_.empty()) throw Error(ErrorKind::InvalidArgument, "zero polynomial has no content");
  Exponents g = terms_.begin()->first;
  for (auto& [e, c] : terms_)
    for (std::size_t i = 0; i < g.size(); ++i) g[i] = std::min(g[i], e[i]);
  return g;
}

MultiPoly MultiPoly::substitute(std::size_t var, const MultiPoly& value) const {
  check(value);
  MultiPoly out(*field_, vars_);
  std::vector<MultiPoly> powers{constant(*field_, vars_, field_->one())};
  for (auto& [e, c] : terms_) {
    while (powers.size() <= e[var]) powers.push_back(powers.back() * value);
    Exponents rest = e;
    rest[var] = 0;
    MultiPoly mono(*field_, vars_);
    mono.add_term(rest, c);
    out += mono * powers[e[var]];
  }
  return out;
}

std::optional<MultiPoly> MultiPoly::divide_exact(const MultiPoly& o) const {
  check(o);
  if (o.is_zero()) throw Error(ErrorKind::DivisionByZero, "division by zero polynomial");
  MultiPoly quotient(*field_, vars_);
  MultiPoly rem = *this;
  const auto& [lo, lc] = o.leading_term();
  const Fq lc_inv = lc.inverse();
  Exponents diff(nvars());
  while (!rem.is_zero()) {
    const auto& [lr, rc] = rem.leading_term();
    for (std::size_t i = 0; i < diff.size(); ++i) {
      if (lr[i] < lo[i]) return std::nullopt;
      diff[i] = lr[i] - lo[i];
    }
    Fq t = rc * lc_inv;
    quotient.add_term(diff, t);
    rem -= o.shifted(diff) * t;
  }
  return quotient;
}

bool operator==(const MultiPoly& a, const MultiPoly& b) {
  if (!a.compatible(b)) return false;
  return a.terms_ == b.terms_;
}

}  // namespace hsd
