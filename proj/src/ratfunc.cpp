#include "hsd/ratfunc.hpp"

#include <algorithm>

namespace hsd {

RationalFunc::RationalFunc(MultiPoly num)
    : num_(std::move(num)), den_(MultiPoly::constant(num_.field(), num_.vars(), num_.field().one())) {}

RationalFunc::RationalFunc(MultiPoly num, MultiPoly den) : num_(std::move(num)), den_(std::move(den)) {
  if (!num_.compatible(den_)) throw Error(ErrorKind::ContextMismatch, "numerator and denominator differ in ring");
  if (den_.is_zero()) throw Error(ErrorKind::DivisionByZero, "zero denominator");
  den_is_one_ = false;
  normalize();
}

RationalFunc RationalFunc::zero(const Field& field, VarList vars) { return RationalFunc(MultiPoly(field, vars)); }

RationalFunc RationalFunc::one(const Field& field, VarList vars) {
  return RationalFunc(MultiPoly::constant(field, vars, field.one()));
}

RationalFunc RationalFunc::constant(const Field& field, VarList vars, Fq c) {
  return RationalFunc(MultiPoly::constant(field, vars, c));
}

void RationalFunc::normalize() {
  const Field& k = num_.field();
  auto set_den_one = [&] {
    den_ = MultiPoly::constant(k, num_.vars(), k.one());
    den_is_one_ = true;
  };
  if (num_.is_zero()) {
    set_den_one();
    return;
  }
  if (den_.is_constant()) {
    num_ = num_ * den_.constant_term().inverse();
    set_den_one();
    return;
  }
  Exponents g = num_.monomial_content();
  Exponents gd = den_.monomial_content();
  bool any = false;
  for (std::size_t i = 0; i < g.size(); ++i) {
    g[i] = std::min(g[i], gd[i]);
    any = any || g[i] != 0;
  }
  if (any) {
    num_ = num_.unshifted(g);
    den_ = den_.unshifted(g);
    if (den_.is_constant()) {
      num_ = num_ * den_.constant_term().inverse();
      set_den_one();
      return;
    }
  }
  if (auto q = num_.divide_exact(den_)) {
    num_ = std::move(*q);
    set_den_one();
    return;
  }
  if (!num_.is_constant()) {
    if (auto q = den_.divide_exact(num_)) {
      den_ = std::move(*q);
      num_ = MultiPoly::constant(k, num_.vars(), k.one());
    }
  }
  Fq lc_inv = den_.leading_term().second.inverse();
  num_ = num_ * lc_inv;
  den_ = den_ * lc_inv;
  den_is_one_ = false;
}

RationalFunc RationalFunc::inverse() const {
  if (is_zero()) throw Error(ErrorKind::DivisionByZero, "inverse of zero rational function");
  return RationalFunc(den_, num_);
}

RationalFunc& RationalFunc::operator+=(const RationalFunc& o) {
  if (den_is_one_ && o.den_is_one_) {
    num_ += o.num_;
    return *this;
  }
  if (den_ == o.den_) {
    num_ += o.num_;
  } else {
    num_ = num_ * o.den_ + o.num_ * den_;
    den_ = den_ * o.den_;
  }
  den_is_one_ = false;
  normalize();
  return *this;
}

RationalFunc& RationalFunc::operator-=(const RationalFunc& o) { return *this += -o; }

RationalFunc& RationalFunc::operator*=(const RationalFunc& o) {
  num_ = num_ * o.num_;
  if (den_is_one_ && o.den_is_one_) return *this;
  den_ = den_ * o.den_;
  den_is_one_ = false;
  normalize();
  return *this;
}

RationalFunc RationalFunc::operator-() const {
  RationalFunc out(*this);
  out.num_ = -out.num_;
  return out;
}

RationalFunc operator*(RationalFunc a, Fq c) {
  a.num_ = a.num_ * c;
  if (a.num_.is_zero() && !a.den_is_one_) a.normalize();
  return a;
}

bool operator==(const RationalFunc& a, const RationalFunc& b) {
  if (a.den_is_one_ && b.den_is_one_) return a.num_ == b.num_;
  return a.num_ * b.den_ == b.num_ * a.den_;
}

}  // namespace hsd
