#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hsd/multipoly.hpp"

namespace hsd {

/// A named group of variables sharing a truncation bound: name1..nameK with
/// name_j^bound = 0. Block names ending in a digit get an underscore before
/// the index ("v2" -> "v2_1").
struct Block {
  std::string name;
  unsigned arity = 1;
  std::uint32_t bound = 2;
  friend bool operator==(const Block&, const Block&) = default;
};

class RingLayout;
using LayoutPtr = std::shared_ptr<const RingLayout>;

/// Variable layout of a truncated polynomial ring. Monomials are packed into
/// a 64-bit key with a guard bit per variable, so multiplying monomials is a
/// single integer addition followed by a bound check.
class RingLayout {
 public:
  static LayoutPtr make(std::vector<Block> blocks);

  const std::vector<Block>& blocks() const noexcept { return blocks_; }
  std::size_t nvars() const noexcept { return names_.size(); }
  const std::string& var_name(std::size_t v) const { return names_.at(v); }
  const std::vector<std::string>& var_names() const noexcept { return names_; }
  std::optional<std::size_t> find_var(std::string_view name) const noexcept;
  std::optional<std::size_t> find_block(std::string_view name) const noexcept;
  std::size_t block_offset(std::size_t block) const { return offsets_.at(block); }
  std::uint32_t bound(std::size_t v) const noexcept { return bounds_[v]; }

  std::uint32_t exponent(std::uint64_t key, std::size_t v) const noexcept {
    return static_cast<std::uint32_t>((key >> shifts_[v]) & masks_[v]);
  }
  /// Requires every exponent below its bound.
  std::uint64_t pack(const Exponents& e) const;
  Exponents unpack(std::uint64_t key) const;
  std::uint64_t degree(std::uint64_t key) const noexcept;
  /// True when every exponent of e is below its bound.
  bool in_range(const Exponents& e) const noexcept;

  /// Product of two monomials; false when it vanishes in the quotient.
  bool mul_keys(std::uint64_t a, std::uint64_t b, std::uint64_t& out) const noexcept {
    std::uint64_t s = a + b;
    if (pow2_) {
      if (s & guard_) return false;
    } else {
      for (std::size_t v = 0; v < bounds_.size(); ++v)
        if (((s >> shifts_[v]) & masks_[v]) >= bounds_[v]) return false;
    }
    out = s;
    return true;
  }

  bool same_as(const RingLayout& o) const noexcept { return this == &o || blocks_ == o.blocks_; }

 private:
  explicit RingLayout(std::vector<Block> blocks);

  std::vector<Block> blocks_;
  std::vector<std::string> names_;
  std::vector<std::size_t> offsets_;
  std::vector<std::uint32_t> bounds_;
  std::vector<unsigned> shifts_;
  std::vector<std::uint64_t> masks_;
  std::uint64_t guard_ = 0;
  bool pow2_ = true;
};

inline std::string block_var_name(const std::string& block, unsigned index) {
  bool digit_end = !block.empty() && block.back() >= '0' && block.back() <= '9';
  return block + (digit_end ? "_" : "") + std::to_string(index);
}

enum class SubstMode {
  /// Ring homomorphism out of the truncated ring: images must be nilpotent.
  Homomorphism,
  /// Evaluate the stored representative as a polynomial; images may be units.
  Polynomial,
};

/// Element of C[blocks]/(truncation). Terms are kept sorted by packed key.
template <class C>
class TruncPoly {
 public:
  using Term = std::pair<std::uint64_t, C>;

  TruncPoly(LayoutPtr layout, C one) : layout_(std::move(layout)), one_(std::move(one)) {}

  static TruncPoly constant(LayoutPtr layout, C value, C one) {
    TruncPoly out(std::move(layout), std::move(one));
    if (!value.is_zero()) out.terms_.emplace_back(0, std::move(value));
    return out;
  }
  static TruncPoly variable(LayoutPtr layout, std::size_t v, C one) {
    TruncPoly out(std::move(layout), std::move(one));
    Exponents e(out.layout_->nvars(), 0);
    e.at(v) = 1;
    if (out.layout_->in_range(e)) out.terms_.emplace_back(out.layout_->pack(e), out.one_);
    return out;
  }
  static TruncPoly from_terms(LayoutPtr layout, C one, std::vector<Term> terms) {
    TruncPoly out(std::move(layout), std::move(one));
    out.terms_ = std::move(terms);
    out.normalize();
    return out;
  }

  const LayoutPtr& layout() const noexcept { return layout_; }
  const C& one() const noexcept { return one_; }
  C zero_coeff() const { return one_ - one_; }
  const std::vector<Term>& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }
  bool is_zero() const noexcept { return terms_.empty(); }

  C coefficient_key(std::uint64_t key) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), key,
                               [](const Term& t, std::uint64_t k) { return t.first < k; });
    if (it == terms_.end() || it->first != key) return zero_coeff();
    return it->second;
  }
  C coefficient(const Exponents& e) const {
    if (!layout_->in_range(e)) return zero_coeff();
    return coefficient_key(layout_->pack(e));
  }
  C constant_term() const { return coefficient_key(0); }

  /// Adds c*x^e; monomials beyond the bounds vanish.
  void add_term(const Exponents& e, const C& c) {
    if (c.is_zero() || !layout_->in_range(e)) return;
    std::uint64_t key = layout_->pack(e);
    auto it = std::lower_bound(terms_.begin(), terms_.end(), key,
                               [](const Term& t, std::uint64_t k) { return t.first < k; });
    if (it != terms_.end() && it->first == key) {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    } else {
      terms_.insert(it, Term{key, c});
    }
  }

  TruncPoly& operator+=(const TruncPoly& o) { return *this = combine(*this, o, false); }
  TruncPoly& operator-=(const TruncPoly& o) { return *this = combine(*this, o, true); }
  TruncPoly operator-() const {
    TruncPoly out(*this);
    for (auto& t : out.terms_) t.second = -t.second;
    return out;
  }
  friend TruncPoly operator+(const TruncPoly& a, const TruncPoly& b) { return combine(a, b, false); }
  friend TruncPoly operator-(const TruncPoly& a, const TruncPoly& b) { return combine(a, b, true); }
  friend TruncPoly operator*(const TruncPoly& a, const TruncPoly& b) {
    a.check(b);
    std::vector<Term> out;
    out.reserve(a.terms_.size() * b.terms_.size());
    const RingLayout& l = *a.layout_;
    for (const auto& [ka, ca] : a.terms_) {
      for (const auto& [kb, cb] : b.terms_) {
        std::uint64_t k;
        if (l.mul_keys(ka, kb, k)) out.emplace_back(k, ca * cb);
      }
    }
    return from_terms(a.layout_, a.one_, std::move(out));
  }
  friend TruncPoly operator*(const TruncPoly& a, const C& c) {
    if (c.is_zero()) return TruncPoly(a.layout_, a.one_);
    TruncPoly out(a);
    for (auto& t : out.terms_) t.second = t.second * c;
    out.drop_zeros();
    return out;
  }
  TruncPoly& operator*=(const TruncPoly& o) { return *this = *this * o; }

  TruncPoly pow(std::uint64_t n) const {
    TruncPoly result = constant(layout_, one_, one_);
    TruncPoly base = *this;
    while (n) {
      if (n & 1) result = result * base;
      n >>= 1;
      if (n) {
        base = base * base;
        if (base.is_zero()) {
          if (n) return TruncPoly(layout_, one_);
        }
      }
    }
    return result;
  }

  /// c * x^key * this
  TruncPoly mul_monomial(std::uint64_t key, const C& c) const {
    TruncPoly out(layout_, one_);
    out.terms_.reserve(terms_.size());
    for (const auto& [k, x] : terms_) {
      std::uint64_t s;
      if (layout_->mul_keys(k, key, s)) out.terms_.emplace_back(s, x * c);
    }
    out.drop_zeros();
    return out;
  }

  /// Inverse of c + n with c a unit and n nilpotent, by the geometric series.
  TruncPoly invert_unit() const {
    C c = constant_term();
    if (c.is_zero()) throw Error(ErrorKind::NotAUnit, "constant term is zero");
    C c_inv = c.inverse();
    TruncPoly n = *this * c_inv;
    n -= constant(layout_, one_, one_);
    TruncPoly minus_n = -n;
    TruncPoly result = constant(layout_, one_, one_);
    TruncPoly term = result;
    for (;;) {
      term = term * minus_n;
      if (term.is_zero()) break;
      result += term;
    }
    return result * c_inv;
  }

  friend bool operator==(const TruncPoly& a, const TruncPoly& b) {
    if (!a.layout_->same_as(*b.layout_)) return false;
    if (a.terms_.size() != b.terms_.size()) return false;
    for (std::size_t i = 0; i < a.terms_.size(); ++i) {
      if (a.terms_[i].first != b.terms_[i].first || !(a.terms_[i].second == b.terms_[i].second)) return false;
    }
    return true;
  }
  friend bool operator!=(const TruncPoly& a, const TruncPoly& b) { return !(a == b); }

  void check(const TruncPoly& o) const {
    if (!layout_->same_as(*o.layout_)) throw Error(ErrorKind::ContextMismatch, "polynomials live in different rings");
  }

 private:
  static TruncPoly combine(const TruncPoly& a, const TruncPoly& b, bool subtract) {
    a.check(b);
    TruncPoly out(a.layout_, a.one_);
    out.terms_.reserve(a.terms_.size() + b.terms_.size());
    std::size_t i = 0, j = 0;
    while (i < a.terms_.size() || j < b.terms_.size()) {
      if (j == b.terms_.size() || (i < a.terms_.size() && a.terms_[i].first < b.terms_[j].first)) {
        out.terms_.push_back(a.terms_[i++]);
      } else if (i == a.terms_.size() || b.terms_[j].first < a.terms_[i].first) {
        out.terms_.emplace_back(b.terms_[j].first, subtract ? -b.terms_[j].second : b.terms_[j].second);
        ++j;
      } else {
        C s = subtract ? a.terms_[i].second - b.terms_[j].second : a.terms_[i].second + b.terms_[j].second;
        if (!s.is_zero()) out.terms_.emplace_back(a.terms_[i].first, std::move(s));
        ++i;
        ++j;
      }
    }
    return out;
  }

  void normalize() {
    std::sort(terms_.begin(), terms_.end(), [](const Term& x, const Term& y) { return x.first < y.first; });
    std::size_t w = 0;
    for (std::size_t r = 0; r < terms_.size();) {
      std::uint64_t key = terms_[r].first;
      C acc = std::move(terms_[r].second);
      ++r;
      while (r < terms_.size() && terms_[r].first == key) {
        acc += terms_[r].second;
        ++r;
      }
      if (!acc.is_zero()) {
        terms_[w].first = key;
        terms_[w].second = std::move(acc);
        ++w;
      }
    }
    terms_.resize(w, Term{0, one_});
  }

  void drop_zeros() {
    terms_.erase(std::remove_if(terms_.begin(), terms_.end(), [](const Term& t) { return t.second.is_zero(); }),
                 terms_.end());
  }

  LayoutPtr layout_;
  C one_;
  std::vector<Term> terms_;
};

using Poly = TruncPoly<Fq>;

inline Poly zero_poly(const LayoutPtr& layout, const Field& field) { return Poly(layout, field.one()); }
inline Poly constant_poly(const LayoutPtr& layout, Fq c) { return Poly::constant(layout, c, c.field().one()); }
inline Poly variable_poly(const LayoutPtr& layout, const Field& field, std::size_t v) {
  return Poly::variable(layout, v, field.one());
}

/// Moves f into target; var_map[v] names the target variable of source
/// variable v, or nullopt when v must not occur. Monomials beyond the target
/// bounds vanish.
template <class C>
TruncPoly<C> remap(const TruncPoly<C>& f, const LayoutPtr& target,
                   const std::vector<std::optional<std::size_t>>& var_map) {
  const RingLayout& src = *f.layout();
  std::vector<typename TruncPoly<C>::Term> out;
  Exponents te(target->nvars());
  for (const auto& [key, c] : f.terms()) {
    std::fill(te.begin(), te.end(), 0);
    bool keep = true;
    for (std::size_t v = 0; v < src.nvars(); ++v) {
      std::uint32_t x = src.exponent(key, v);
      if (x == 0) continue;
      if (!var_map[v]) throw Error(ErrorKind::UnknownVariable, "variable " + src.var_name(v) + " has no target");
      te[*var_map[v]] += x;
    }
    if (!target->in_range(te)) keep = false;
    if (keep) out.emplace_back(target->pack(te), c);
  }
  return TruncPoly<C>::from_terms(target, f.one(), std::move(out));
}

/// remap matching variables by name.
template <class C>
TruncPoly<C> remap_by_name(const TruncPoly<C>& f, const LayoutPtr& target) {
  std::vector<std::optional<std::size_t>> map;
  for (const auto& name : f.layout()->var_names()) map.push_back(target->find_var(name));
  return remap(f, target, map);
}

/// Replaces the named variables of f by images living in target. Variables
/// without an image are carried over to the target variable of the same name.
template <class C>
TruncPoly<C> substitute(const TruncPoly<C>& f, const std::map<std::string, TruncPoly<C>>& images,
                        const LayoutPtr& target, SubstMode mode = SubstMode::Homomorphism) {
  const RingLayout& src = *f.layout();
  for (const auto& [name, img] : images) {
    if (!src.find_var(name)) throw Error(ErrorKind::UnknownVariable, "no variable named " + name);
    if (!img.layout()->same_as(*target)) throw Error(ErrorKind::ContextMismatch, "image of " + name + " is in another ring");
    if (mode == SubstMode::Homomorphism && !img.constant_term().is_zero())
      throw Error(ErrorKind::NonNilpotentImage, "image of " + name + " has a nonzero constant term");
  }
  std::vector<const TruncPoly<C>*> img_of(src.nvars(), nullptr);
  std::vector<std::size_t> subst_vars;
  std::vector<std::optional<std::size_t>> keep_of(src.nvars());
  for (std::size_t v = 0; v < src.nvars(); ++v) {
    auto it = images.find(src.var_name(v));
    if (it != images.end()) {
      img_of[v] = &it->second;
      subst_vars.push_back(v);
    } else {
      keep_of[v] = target->find_var(src.var_name(v));
    }
  }

  using Key = Exponents;
  std::map<Key, TruncPoly<C>> memo;
  const TruncPoly<C> unit = TruncPoly<C>::constant(target, f.one(), f.one());
  // power product of images for the exponent vector k over subst_vars
  auto power = [&](auto&& self, const Key& k) -> const TruncPoly<C>& {
    auto it = memo.find(k);
    if (it != memo.end()) return it->second;
    std::size_t last = k.size();
    for (std::size_t i = k.size(); i-- > 0;) {
      if (k[i] != 0) {
        last = i;
        break;
      }
    }
    if (last == k.size()) return memo.emplace(k, unit).first->second;
    Key prev = k;
    --prev[last];
    TruncPoly<C> value = self(self, prev) * *img_of[subst_vars[last]];
    return memo.emplace(k, std::move(value)).first->second;
  };

  std::vector<typename TruncPoly<C>::Term> out;
  Exponents te(target->nvars());
  Key k(subst_vars.size());
  for (const auto& [key, c] : f.terms()) {
    std::fill(te.begin(), te.end(), 0);
    bool vanish = false;
    for (std::size_t v = 0; v < src.nvars(); ++v) {
      if (img_of[v]) continue;
      std::uint32_t x = src.exponent(key, v);
      if (x == 0) continue;
      if (!keep_of[v]) throw Error(ErrorKind::UnknownVariable, "variable " + src.var_name(v) + " missing in target");
      te[*keep_of[v]] += x;
    }
    if (!target->in_range(te)) vanish = true;
    if (vanish) continue;
    for (std::size_t i = 0; i < subst_vars.size(); ++i) k[i] = src.exponent(key, subst_vars[i]);
    const TruncPoly<C>& pk = power(power, k);
    std::uint64_t shift = target->pack(te);
    for (const auto& [pkey, pc] : pk.terms()) {
      std::uint64_t s;
      if (target->mul_keys(pkey, shift, s)) out.emplace_back(s, pc * c);
    }
  }
  return TruncPoly<C>::from_terms(target, f.one(), std::move(out));
}

/// Inverse of the Frobenius: g with g^p = f. Every exponent of f must be
/// divisible by p (FractionalExponent otherwise).
Poly frobenius_root(const Poly& f);

/// Converts by variable name; monomials beyond the bounds vanish.
Poly to_trunc(const MultiPoly& f, const LayoutPtr& layout);
MultiPoly to_multipoly(const Poly& f);

}  // namespace hsd
