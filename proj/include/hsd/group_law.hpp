#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "hsd/index_set.hpp"
#include "hsd/truncated_poly.hpp"

namespace hsd {

enum class LawKind { Additive, Multiplicative, Witt2, Product, Custom };
std::string to_string(LawKind kind);

struct LawAxiomsReport {
  bool unit_left = false;
  bool unit_right = false;
  bool associative = false;
  bool commutative = false;
};

class FormalGroupLaw;
using LawPtr = std::shared_ptr<const FormalGroupLaw>;

/// A truncated formal group law F in k[v,w]/(v^{p^m}, w^{p^m}) with e
/// components, v = (v1..ve) and w = (w1..we). Immutable; derived tables
/// (powers of F, the p-series in the variable v^p) are built on first use.
class FormalGroupLaw {
 public:
  static LawPtr additive(const Field& field, unsigned e, unsigned m);
  static LawPtr multiplicative(const Field& field, unsigned m);
  /// (v1 + w1 + sum_{n=0}^{N} alpha_n H_n(v2, w2), v2 + w2), N = min(M, m-1).
  static LawPtr witt2(const Field& field, unsigned m, std::vector<Fq> alphas);
  static LawPtr product(std::vector<LawPtr> factors);
  /// Axioms are verified; LawAxiomViolation on failure. A weak law only has
  /// to satisfy the unit axioms.
  static LawPtr custom(const Field& field, unsigned e, unsigned m, std::vector<Poly> components, bool weak = false);
  static LawPtr custom(const Field& field, unsigned e, unsigned m, const std::vector<std::string>& components,
                       bool weak = false);

  FormalGroupLaw(const FormalGroupLaw&) = delete;
  FormalGroupLaw& operator=(const FormalGroupLaw&) = delete;

  LawKind kind() const noexcept { return kind_; }
  const Field& field() const noexcept { return *field_; }
  std::uint32_t p() const noexcept { return field_->p(); }
  unsigned e() const noexcept { return e_; }
  unsigned m() const noexcept { return m_; }
  std::uint32_t bound() const noexcept { return bound_; }
  bool weak() const noexcept { return weak_; }
  bool commutative() const noexcept { return axioms_.commutative; }
  const LawAxiomsReport& axioms() const noexcept { return axioms_; }

  /// Witt2 only: the alphas as given and alpha_l (zero past N).
  const std::vector<Fq>& alphas() const noexcept { return alphas_; }
  Fq alpha(unsigned l) const;
  /// Witt2 only: N = min(M, m-1), or -1 without alphas.
  int top_alpha() const noexcept;
  const std::vector<LawPtr>& factors() const noexcept { return factors_; }

  /// Layout with blocks v and w.
  const LayoutPtr& layout() const noexcept { return layout_; }
  /// Layout with the single block v.
  const LayoutPtr& v_layout() const noexcept { return v_layout_; }
  const std::vector<Poly>& components() const noexcept { return components_; }
  const IndexSet& indices() const noexcept { return indices_; }

  /// F^k for every k of indices(), by flat index.
  const std::vector<Poly>& powers() const;
  /// c^k_{ij} = [v^i w^j] F^k as (flat k, coefficient) pairs with nonzero coefficient.
  const std::vector<std::pair<std::size_t, Fq>>& structure_constants(std::size_t i, std::size_t j) const;
  std::vector<std::pair<std::size_t, Fq>> structure_constants(const MultiIndex& i, const MultiIndex& j) const;

  /// P with P(v^p) = [p]_F(v) (exponents divided by p, coefficients kept),
  /// computed from the p-fold iterated law with enough precision that no
  /// term is lost; lives in v_layout().
  const std::vector<Poly>& p_root() const;
  /// For each flat i, the pairs (flat k, [v^i] P^k) with nonzero coefficient.
  const std::vector<std::vector<std::pair<std::size_t, Fq>>>& evp_coefficients() const;

 private:
  FormalGroupLaw(LawKind kind, const Field& field, unsigned e, unsigned m, std::vector<Poly> components, bool weak);

  LawKind kind_;
  const Field* field_;
  unsigned e_, m_;
  std::uint32_t bound_;
  bool weak_;
  LayoutPtr layout_, v_layout_;
  std::vector<Poly> components_;
  IndexSet indices_;
  LawAxiomsReport axioms_;
  std::vector<Fq> alphas_;
  std::vector<LawPtr> factors_;

  mutable std::once_flag powers_once_, table_once_, root_once_, evp_once_;
  mutable std::vector<Poly> powers_;
  mutable std::vector<std::vector<std::pair<std::size_t, Fq>>> table_;
  mutable std::vector<Poly> root_;
  mutable std::vector<std::vector<std::pair<std::size_t, Fq>>> evp_;
};

/// Checks unit, associativity and commutativity of components over layout
/// (blocks v, w) at truncation level bound.
LawAxiomsReport check_axioms(const FormalGroupLaw& law);
LawAxiomsReport check_axioms(const LayoutPtr& layout, const std::vector<Poly>& components);

/// H_n(x, y) = sum_{i=1}^{p-1} lambda_i x^{i p^n} y^{(p-i) p^n} over F_p, in
/// variables named x and y.
MultiPoly h_n(std::uint32_t p, unsigned n);

/// [N]_F in v_layout(): [0] = 0, [N+1] = F(v, [N]).
std::vector<Poly> n_series(const FormalGroupLaw& law, unsigned n);

struct IteratedLaw {
  LayoutPtr layout;  // blocks v1..vN, variables v1_1, ..., vN_e
  std::vector<Poly> components;
};
/// F_1 = v1, F_{N+1}(v1..v_{N+1}) = F_N(v1..v_{N-1}, F(vN, v_{N+1})).
IteratedLaw iterated_law(const FormalGroupLaw& law, unsigned n);

/// The same law read at level m' <= m.
LawPtr truncate_law(const LawPtr& law, unsigned m_prime);

}  // namespace hsd
