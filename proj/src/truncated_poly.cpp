#include "hsd/truncated_poly.hpp"

#include <bit>

namespace hsd {

LayoutPtr RingLayout::make(std::vector<Block> blocks) {
  return LayoutPtr(new RingLayout(std::move(blocks)));
}

RingLayout::RingLayout(std::vector<Block> blocks) : blocks_(std::move(blocks)) {
  unsigned shift = 0;
  for (const auto& b : blocks_) {
    if (b.bound == 0) throw Error(ErrorKind::InvalidArgument, "truncation bound must be positive");
    for (const auto& other : blocks_) {
      if (&other != &b && other.name == b.name) throw Error(ErrorKind::InvalidArgument, "duplicate block " + b.name);
    }
    offsets_.push_back(names_.size());
    const unsigned width = static_cast<unsigned>(std::bit_width(b.bound - 1)) + 1;
    if (!std::has_single_bit(b.bound)) pow2_ = false;
    for (unsigned j = 1; j <= b.arity; ++j) {
      names_.push_back(block_var_name(b.name, j));
      bounds_.push_back(b.bound);
      shifts_.push_back(shift);
      masks_.push_back((std::uint64_t{1} << width) - 1);
      // for bound 2^k the guard bit is the top bit of the field
      guard_ |= std::uint64_t{1} << (shift + width - 1);
      shift += width;
      if (shift > 64) throw Error(ErrorKind::ResourceLimit, "too many variables for packed monomials");
    }
  }
  if (pow2_) {
    for (auto b : bounds_) {
      if (b == 1) pow2_ = false;
    }
  }
}

std::optional<std::size_t> RingLayout::find_var(std::string_view name) const noexcept {
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return i;
  return std::nullopt;
}

std::optional<std::size_t> RingLayout::find_block(std::string_view name) const noexcept {
  for (std::size_t i = 0; i < blocks_.size(); ++i)
    if (blocks_[i].name == name) return i;
  return std::nullopt;
}

std::uint64_t RingLayout::pack(const Exponents& e) const {
  if (e.size() != names_.size()) throw Error(ErrorKind::InvalidArgument, "exponent vector has wrong length");
  std::uint64_t key = 0;
  for (std::size_t v = 0; v < e.size(); ++v) {
    if (e[v] >= bounds_[v]) throw Error(ErrorKind::IndexRange, "exponent beyond truncation bound");
    key |= static_cast<std::uint64_t>(e[v]) << shifts_[v];
  }
  return key;
}

Exponents RingLayout::unpack(std::uint64_t key) const {
  Exponents e(names_.size());
  for (std::size_t v = 0; v < e.size(); ++v) e[v] = exponent(key, v);
  return e;
}

std::uint64_t RingLayout::degree(std::uint64_t key) const noexcept {
  std::uint64_t d = 0;
  for (std::size_t v = 0; v < names_.size(); ++v) d += exponent(key, v);
  return d;
}

bool RingLayout::in_range(const Exponents& e) const noexcept {
  if (e.size() != names_.size()) return false;
  for (std::size_t v = 0; v < e.size(); ++v)
    if (e[v] >= bounds_[v]) return false;
  return true;
}

Poly frobenius_root(const Poly& f) {
  const RingLayout& l = *f.layout();
  std::vector<Poly::Term> out;
  Exponents e(l.nvars());
  for (const auto& [key, c] : f.terms()) {
    const std::uint32_t p = c.field().p();
    for (std::size_t v = 0; v < l.nvars(); ++v) {
      std::uint32_t x = l.exponent(key, v);
      if (x % p != 0)
        throw Error(ErrorKind::FractionalExponent, "exponent of " + l.var_name(v) + " not divisible by p");
      e[v] = x / p;
    }
    out.emplace_back(l.pack(e), c.frobenius_inverse());
  }
  return Poly::from_terms(f.layout(), f.one(), std::move(out));
}

Poly to_trunc(const MultiPoly& f, const LayoutPtr& layout) {
  std::vector<std::size_t> idx;
  for (const auto& name : *f.vars()) {
    auto v = layout->find_var(name);
    idx.push_back(v ? *v : layout->nvars());
  }
  std::vector<Poly::Term> out;
  Exponents e(layout->nvars());
  for (const auto& [fe, c] : f.terms()) {
    std::fill(e.begin(), e.end(), 0);
    for (std::size_t i = 0; i < fe.size(); ++i) {
      if (fe[i] == 0) continue;
      if (idx[i] == layout->nvars()) throw Error(ErrorKind::UnknownVariable, "unknown variable " + (*f.vars())[i]);
      e[idx[i]] += fe[i];
    }
    if (layout->in_range(e)) out.emplace_back(layout->pack(e), c);
  }
  return Poly::from_terms(layout, f.field().one(), std::move(out));
}

MultiPoly to_multipoly(const Poly& f) {
  const Field& k = f.one().field();
  MultiPoly out(k, make_vars(f.layout()->var_names()));
  for (const auto& [key, c] : f.terms()) out.add_term(f.layout()->unpack(key), c);
  return out;
}

}  // namespace hsd
