#pragma once

#include "hsd/multipoly.hpp"

namespace hsd {

/// Element of F_{p^d}(x_1..x_n) as num/den. Normal form: zero has den 1,
/// constant denominators are absorbed, otherwise den is monic. Common
/// monomial content and exact polynomial quotients are cancelled; general
/// gcds are not, so equal fractions may have different representatives and
/// operator== compares by cross multiplication.
class RationalFunc {
 public:
  explicit RationalFunc(MultiPoly num);
  RationalFunc(MultiPoly num, MultiPoly den);

  static RationalFunc zero(const Field& field, VarList vars);
  static RationalFunc one(const Field& field, VarList vars);
  static RationalFunc constant(const Field& field, VarList vars, Fq c);

  const MultiPoly& num() const noexcept { return num_; }
  const MultiPoly& den() const noexcept { return den_; }
  const Field& field() const noexcept { return num_.field(); }
  const VarList& vars() const noexcept { return num_.vars(); }

  bool is_zero() const noexcept { return num_.is_zero(); }
  bool is_polynomial() const noexcept { return den_is_one_; }
  RationalFunc inverse() const;

  RationalFunc& operator+=(const RationalFunc& o);
  RationalFunc& operator-=(const RationalFunc& o);
  RationalFunc& operator*=(const RationalFunc& o);
  RationalFunc operator-() const;
  friend RationalFunc operator+(RationalFunc a, const RationalFunc& b) { return a += b; }
  friend RationalFunc operator-(RationalFunc a, const RationalFunc& b) { return a -= b; }
  friend RationalFunc operator*(RationalFunc a, const RationalFunc& b) { return a *= b; }
  friend RationalFunc operator/(const RationalFunc& a, const RationalFunc& b) { return a * b.inverse(); }
  friend RationalFunc operator*(RationalFunc a, Fq c);

  friend bool operator==(const RationalFunc& a, const RationalFunc& b);
  friend bool operator!=(const RationalFunc& a, const RationalFunc& b) { return !(a == b); }

 private:
  void normalize();

  MultiPoly num_;
  MultiPoly den_;
  bool den_is_one_ = true;
};

}  // namespace hsd
