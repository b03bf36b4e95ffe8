#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hsd/constants_lattice.hpp"

namespace hsd {

/// Elements z_1..z_e of the model ring proposed as a canonical basis.
using BasisCandidate = std::vector<Vector>;

struct BasisReport {
  bool pass = false;
  /// apply(D, z_j) = F_j(z, v), per generator.
  std::vector<bool> embedding_ok;
  std::optional<std::size_t> bad_generator;
  std::optional<MultiIndex> first_bad_index;
  std::string expected, actual;  // at the first bad index
  std::size_t ambient_dim = 0;
  std::size_t constants_dim = 0;
  bool degree_ok = false;    // dim A = p^e dim C
  bool independent = false;  // z^a, a in [p]^e, independent over C
};

/// Checks the canonical embedding condition for every generator, and
/// p-independence of z over the constants C = F_0.
BasisReport verify_canonical_basis(const HSDerivation& d, const FormalGroupLaw& law, const BasisCandidate& z);

/// Witt2 laws only. The returned elements are reduced modulo the absolute
/// constants and their full tables are checked before returning.
/// HypothesisFailure when a structural assumption fails on the model (the
/// operator is named); CorrectionUnsolvable when a correction has no solution.
Vector find_y(const HSDerivation& d);
/// D_(1,0) w = 1, D_(0,1) w = 0 and every other unit p-power component kills w.
Vector find_w(const HSDerivation& d);
Vector find_x(const HSDerivation& d, const Vector& y);

/// Additive or multiplicative law with e = 1.
Vector one_dim_basis(const HSDerivation& d);

/// Splits the law into witt2, additive and multiplicative factors (additive
/// laws of dimension e count as e factors), finds a basis of each factor
/// inside the constants of the other factors and verifies the concatenation.
/// FactorUnsupported for custom factors, AssemblyMismatch if verification fails.
BasisCandidate assemble_product_basis(const HSDerivation& d);

/// Dispatch on the law kind; every supported law goes through the factor split.
BasisCandidate find_canonical_basis(const HSDerivation& d);

struct TableEntry {
  MultiIndex index;
  Vector value;
};
/// The nonzero values D_i(z) over all indices, plus D_0(z).
std::vector<TableEntry> derivation_table(const HSDerivation& d, const Vector& z);

/// Expected D_(i,j)(y): y, 1 at (0,1), zero elsewhere.
Vector y_table_expected(const HSDerivation& d, const Vector& y, const MultiIndex& i);
/// Expected D_(i,j)(x): x, 1 at (1,0), alpha_l lambda_k y^((p-k)p^l) at (0,k p^l), zero elsewhere.
Vector x_table_expected(const HSDerivation& d, const FormalGroupLaw& law, const Vector& x, const Vector& y,
                        const MultiIndex& i);
/// First index where the table of y (resp. x) deviates, over the whole index box.
std::optional<MultiIndex> y_table_mismatch(const HSDerivation& d, const Vector& y);
std::optional<MultiIndex> x_table_mismatch(const HSDerivation& d, const Vector& x, const Vector& y);

}  // namespace hsd
