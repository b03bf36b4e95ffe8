#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "hsd/group_law.hpp"
#include "hsd/ratfunc.hpp"

namespace hsd {

using RatMatrix = std::vector<std::vector<RationalFunc>>;  // rows of entries

/// The canonical derivation of a law on K = F_q(x1..xe), D(x_j) = F_j(x, v),
/// extended to fractions. The law's first block must not have been cut by
/// truncation (true for the additive, multiplicative, witt2 and product laws).
class FieldDerivationContext {
 public:
  explicit FieldDerivationContext(LawPtr law);

  const FormalGroupLaw& law() const noexcept { return *law_; }
  const Field& field() const noexcept { return law_->field(); }
  std::uint32_t p() const noexcept { return law_->p(); }
  unsigned e() const noexcept { return law_->e(); }
  unsigned m() const noexcept { return law_->m(); }
  /// x1..xe.
  const VarList& vars() const noexcept { return vars_; }
  /// D_i(x_j) by flat index of IndexSet(e, p^m).
  const std::vector<MultiPoly>& images(unsigned j) const { return images_.at(j); }

  RationalFunc parse(const std::string& text) const;

  /// D_i(f) for i in IndexSet(e, bound), bound <= p^m, by flat index.
  std::vector<MultiPoly> apply(const MultiPoly& f, std::uint32_t bound) const;
  std::vector<RationalFunc> apply(const RationalFunc& f, std::uint32_t bound) const;

 private:
  LawPtr law_;
  VarList vars_;
  std::vector<std::vector<MultiPoly>> images_;
};

/// Entry (i, j) = D_i(f_j) for the p^e indices i in [p]^e, in flat order.
RatMatrix wronskian_matrix(const FieldDerivationContext& ctx, const std::vector<RationalFunc>& elements);

/// Exact rank over the rational function field, by fraction-free elimination
/// after clearing the denominators of each column.
std::size_t rank_over_field(const RatMatrix& m);

struct DependenceResult {
  bool dependent = false;
  std::size_t rank = 0;
  /// Kernel vector of the Wronskian supported on the shortest dependent
  /// prefix f_0..f_j, scaled so that its entry j is -1. Empty when independent.
  std::vector<RationalFunc> witness;
};
DependenceResult dependence_test(const FieldDerivationContext& ctx, const std::vector<RationalFunc>& elements);

/// Whether z_1..z_n are p-independent over K^p: the monomials z^a, a in
/// [p]^n, have a Wronskian of full rank p^n under the additive law of
/// dimension e = number of variables. TooManyElements when n > e.
bool p_independence_test(const std::vector<RationalFunc>& elements);

}  // namespace hsd
