#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "hsd/group_law.hpp"
#include "hsd/matrix.hpp"

namespace hsd {

class ArtinianModel;
using ModelPtr = std::shared_ptr<const ArtinianModel>;

/// A = k[x1..xe]/(x_i^{p^m}) with its monomial basis enumerated like
/// IndexSet. Elements are coordinate vectors in that basis.
class ArtinianModel {
 public:
  static ModelPtr make(const Field& field, unsigned e, unsigned m);

  const Field& field() const noexcept { return *field_; }
  std::uint32_t p() const noexcept { return field_->p(); }
  unsigned e() const noexcept { return e_; }
  unsigned m() const noexcept { return m_; }
  std::uint32_t bound() const noexcept { return bound_; }
  std::size_t dim() const noexcept { return basis_.size(); }
  /// Basis monomials of A; also the index set of derivation components.
  const IndexSet& basis() const noexcept { return basis_; }

  const LayoutPtr& x_layout() const noexcept { return x_; }
  const LayoutPtr& v_layout() const noexcept { return v_; }
  const LayoutPtr& xv_layout() const noexcept { return xv_; }
  const LayoutPtr& xvw_layout() const noexcept { return xvw_; }

  Vector to_vector(const Poly& f) const;
  Poly to_poly(const Vector& f) const;
  Vector parse(const std::string& text) const;
  std::string format(const Vector& f) const;

  Vector one() const;
  Vector constant(Fq c) const;
  Vector generator(unsigned j) const;
  Vector multiply(const Vector& a, const Vector& b) const;
  Vector power(const Vector& a, std::uint64_t n) const;

 private:
  ArtinianModel(const Field& field, unsigned e, unsigned m);

  const Field* field_;
  unsigned e_, m_;
  std::uint32_t bound_;
  IndexSet basis_;
  LayoutPtr x_, v_, xv_, xvw_;
};

/// A Hasse-Schmidt derivation D = (D_i) on an artinian model, given by the
/// images D(x_j) = sum_i D_i(x_j) v^i in A[v]/(v^{p^m}). Component matrices
/// satisfy M_i * vec(f) = vec(D_i f) and are built on first use.
class HSDerivation {
 public:
  static HSDerivation canonical(const LawPtr& law);
  static HSDerivation from_images(const ModelPtr& model, std::vector<Poly> images, LawPtr law = nullptr);
  static HSDerivation from_images(const ModelPtr& model, const std::vector<std::string>& images, LawPtr law = nullptr);
  /// D(x_j) = x_j.
  static HSDerivation trivial(const ModelPtr& model, LawPtr law = nullptr);

  const ModelPtr& model() const noexcept { return model_; }
  const LawPtr& law() const noexcept { return law_; }
  /// The law, or InvalidArgument when none is attached.
  const FormalGroupLaw& require_law() const;
  const std::vector<Poly>& images() const noexcept { return images_; }
  const IndexSet& indices() const noexcept { return model_->basis(); }

  /// D(f) in A[v] for f in A (f in the x layout).
  Poly apply(const Poly& f) const;
  Vector component_apply(const MultiIndex& i, const Vector& f) const;
  const Matrix& component(const MultiIndex& i) const;
  const Matrix& component(std::size_t flat) const;
  const std::vector<Matrix>& components() const;

 private:
  struct Memo {
    std::once_flag once;
    std::vector<Matrix> matrices;
  };
  HSDerivation(ModelPtr model, std::vector<Poly> images, LawPtr law);
  /// Images read off the generator columns; the matrices seed the memo.
  static HSDerivation with_matrices(const ModelPtr& model, std::vector<Matrix> matrices, LawPtr law);
  friend HSDerivation twist_by_automorphism(const HSDerivation& d, const std::vector<Poly>& phi);
  friend HSDerivation reconstruct_from_ppowers(const HSDerivation& d);

  ModelPtr model_;
  LawPtr law_;
  std::vector<Poly> images_;
  std::shared_ptr<Memo> memo_;
};

enum class IterativityScope { Generators, AllBasis };

struct IterativityReport {
  bool pass = true;
  /// Generator index (or basis index for AllBasis) of the first failure.
  std::optional<std::size_t> failing_element;
  /// First differing monomial of A[v,w] with both coefficients.
  std::string difference;
};

/// Compares ev_F(D(f)) with D_w[v](D(f)) for f = x_j (or every basis monomial).
IterativityReport check_iterativity(const HSDerivation& d, const FormalGroupLaw& law,
                                    IterativityScope scope = IterativityScope::Generators);

/// D_j o D_i.
Matrix compose(const HSDerivation& d, const MultiIndex& j, const MultiIndex& i);

/// D^{(p)}_i (the p-fold composition of D_i with itself) for every flat i,
/// from the p-series of the attached law.
std::vector<Matrix> p_fold_evP(const HSDerivation& d);

/// The same derivation on A at level m' <= m with the truncated law.
HSDerivation truncate_derivation(const HSDerivation& d, unsigned m_prime);

/// phi[v] o D o phi^{-1} for the automorphism x_j -> phi[j] of A.
HSDerivation twist_by_automorphism(const HSDerivation& d, const std::vector<Poly>& phi);
HSDerivation twist_by_automorphism(const HSDerivation& d, const std::vector<std::string>& phi);

/// Rebuilds every component from the unit p-power components using the
/// structure constants of the law; ReconstructionMismatch if the result
/// differs from d.
HSDerivation reconstruct_from_ppowers(const HSDerivation& d);

}  // namespace hsd
