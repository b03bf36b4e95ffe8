#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hsd/hs_derivation.hpp"

namespace hsd {

/// Subspace of F_q^n, kept as the row space of a reduced row echelon basis.
/// The basis is canonical, so equal subspaces have equal bases.
class Subspace {
 public:
  static Subspace ambient(const Field& field, std::size_t n);
  static Subspace zero(const Field& field, std::size_t n);
  static Subspace span(const Field& field, std::size_t n, const std::vector<Vector>& vectors);
  static Subspace kernel(const Matrix& m);
  /// Column space.
  static Subspace image(const Matrix& m);

  const Field& field() const noexcept { return *field_; }
  std::size_t ambient_dim() const noexcept { return n_; }
  std::size_t dim() const noexcept { return pivots_.size(); }
  /// Rows form the basis.
  const Matrix& basis() const noexcept { return basis_; }
  std::vector<Vector> basis_vectors() const;
  const std::vector<std::size_t>& pivots() const noexcept { return pivots_; }

  bool contains(const Vector& v) const;
  bool contains(const Subspace& o) const;
  Subspace intersect(const Subspace& o) const;
  Subspace sum(const Subspace& o) const;
  /// Canonical representative of v + this: zero at every pivot position.
  Vector reduce(const Vector& v) const;
  /// Coordinates of v in the basis (v must lie in the subspace).
  Vector coordinates(const Vector& v) const;
  /// n x dim matrix whose columns are the basis.
  Matrix inclusion() const;

  friend bool operator==(const Subspace& a, const Subspace& b) noexcept {
    return a.n_ == b.n_ && a.basis_ == b.basis_;
  }
  friend bool operator!=(const Subspace& a, const Subspace& b) noexcept { return !(a == b); }

 private:
  Subspace(const Field& field, std::size_t n, Echelon e);

  const Field* field_;
  std::size_t n_;
  Matrix basis_;
  std::vector<std::size_t> pivots_;
};

/// The matrix of t restricted to the invariant subspace v, in v's basis;
/// nullopt when t(v) is not contained in v.
std::optional<Matrix> restrict_operator(const Matrix& t, const Subspace& v);

/// z with t z = target, z in `within` when given, free coordinates zero.
/// Throws NoSolution.
Vector preimage_solve(const Matrix& t, const Vector& target, const Subspace* within = nullptr);

struct ZmReport {
  bool nilpotent_p = false;   // T^p = 0
  bool ker_im_equal = false;  // ker T^{p-1} = im T
  bool holds() const noexcept { return nilpotent_p && ker_im_equal; }
};
ZmReport zm_check(const Matrix& t, std::uint32_t p);
/// Checks t restricted to the invariant subspace `on`; HypothesisFailure
/// when `on` is not invariant.
ZmReport zm_check(const Matrix& t, const Subspace& on, std::uint32_t p);

Subspace kernel_component(const HSDerivation& d, const MultiIndex& i);
/// C = intersection of ker D_{e_l} over the unit indices.
Subspace constants(const HSDerivation& d);
/// Intersection of the kernels of every D_i with i != 0.
Subspace absolute_constants(const HSDerivation& d);

/// F_s = common kernel of D_{p^j e_l} for j <= s.
Subspace tower_level(const HSDerivation& d, int s);

struct ConstantsTower {
  std::vector<Subspace> levels;  // levels[0] = F_{-1} = A, levels[s+1] = F_s, s = 0..m-1
  std::vector<std::size_t> dims;
  /// dim F_{s-1} / dim F_s for s = 0..m-1, nullopt when not an integer.
  std::vector<std::optional<std::size_t>> ratios;
  std::vector<bool> multiplicatively_closed;  // per level
  bool degenerate = false;                    // some ratio differs from p^e
};
ConstantsTower tower(const HSDerivation& d, bool check_closure = true);

/// Whether the products of all pairs of basis elements stay in s.
bool multiplicatively_closed(const ArtinianModel& model, const Subspace& s);

}  // namespace hsd
