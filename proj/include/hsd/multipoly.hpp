#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hsd/field.hpp"

namespace hsd {

using Exponents = std::vector<std::uint32_t>;
using MultiIndex = Exponents;

std::uint64_t total_degree(const Exponents& e) noexcept;

/// Graded lexicographic order, first variable most significant.
struct GrlexLess {
  bool operator()(const Exponents& a, const Exponents& b) const noexcept;
};

/// Order used for display and for basis enumeration: degree ascending, then
/// lexicographically descending within a degree (x1 before x2).
bool display_less(const Exponents& a, const Exponents& b) noexcept;

using VarList = std::shared_ptr<const std::vector<std::string>>;
VarList make_vars(std::vector<std::string> names);
/// {prefix1, ..., prefixN}
VarList numbered_vars(const std::string& prefix, unsigned n);

/// Sparse polynomial in F_{p^d}[x_1..x_n], no truncation.
class MultiPoly {
 public:
  using TermMap = std::map<Exponents, Fq, GrlexLess>;

  MultiPoly(const Field& field, VarList vars);
  static MultiPoly constant(const Field& field, VarList vars, Fq value);
  static MultiPoly variable(const Field& field, VarList vars, std::size_t index);

  const Field& field() const noexcept { return *field_; }
  const VarList& vars() const noexcept { return vars_; }
  std::size_t nvars() const noexcept { return vars_->size(); }
  const TermMap& terms() const noexcept { return terms_; }

  bool is_zero() const noexcept { return terms_.empty(); }
  bool is_constant() const noexcept;
  Fq constant_term() const;
  Fq coefficient(const Exponents& e) const;
  void add_term(const Exponents& e, Fq c);

  /// Grlex largest term. Requires nonzero.
  const std::pair<const Exponents, Fq>& leading_term() const;
  std::uint64_t total_degree() const noexcept;
  std::uint32_t degree_in(std::size_t var) const noexcept;

  MultiPoly& operator+=(const MultiPoly& o);
  MultiPoly& operator-=(const MultiPoly& o);
  MultiPoly operator-() const;
  friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
  friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }
  friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b);
  friend MultiPoly operator*(MultiPoly a, Fq c);
  friend MultiPoly operator*(Fq c, MultiPoly a) { return std::move(a) * c; }
  MultiPoly& operator*=(const MultiPoly& o) { return *this = *this * o; }
  MultiPoly pow(std::uint64_t n) const;

  /// Multiply by the monomial x^e.
  MultiPoly shifted(const Exponents& e) const;
  /// Divide by x^e; every term must be divisible.
  MultiPoly unshifted(const Exponents& e) const;
  /// Componentwise minimum exponent over all terms. Requires nonzero.
  Exponents monomial_content() const;

  MultiPoly substitute(std::size_t var, const MultiPoly& value) const;
  /// Quotient when o divides this exactly, nullopt otherwise.
  std::optional<MultiPoly> divide_exact(const MultiPoly& o) const;

  bool compatible(const MultiPoly& o) const noexcept;
  friend bool operator==(const MultiPoly& a, const MultiPoly& b);
  friend bool operator!=(const MultiPoly& a, const MultiPoly& b) { return !(a == b); }

 private:
  void check(const MultiPoly& o) const;

  const Field* field_;
  VarList vars_;
  TermMap terms_;
};

}  // namespace hsd
