#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hsd/errors.hpp"

namespace hsd {

class Fq;

/// F_{p^d} = F_p[g]/(modulus). An element is encoded by the base-p digits of
/// its residue polynomial: digit i is the coefficient of g^i.
/// Fields are interned; references returned by get() stay valid for the
/// lifetime of the process and compare equal by address.
class Field {
 public:
  /// An empty modulus selects the first monic irreducible polynomial (in
  /// counting order of its coefficients) whose root is primitive.
  static const Field& get(std::uint32_t p, unsigned d = 1,
                          std::vector<std::uint32_t> modulus = {});

  Field(const Field&) = delete;
  Field& operator=(const Field&) = delete;

  std::uint32_t p() const noexcept { return p_; }
  unsigned d() const noexcept { return d_; }
  std::uint32_t q() const noexcept { return q_; }
  /// Coefficients low to high, monic, size d+1.
  const std::vector<std::uint32_t>& modulus() const noexcept { return modulus_; }
  bool generator_is_primitive() const noexcept { return g_primitive_; }

  Fq zero() const;
  Fq one() const;
  Fq from_int(long long value) const;
  Fq element(std::uint32_t code) const;
  /// The class of g. Only meaningful for d > 1.
  Fq generator() const;

  std::uint32_t add(std::uint32_t a, std::uint32_t b) const noexcept {
    if (d_ == 1) {
      std::uint32_t s = a + b;
      return s >= p_ ? s - p_ : s;
    }
    return add_digits(a, b);
  }
  std::uint32_t neg(std::uint32_t a) const noexcept {
    if (d_ == 1) return a == 0 ? 0 : p_ - a;
    return neg_digits(a);
  }
  std::uint32_t sub(std::uint32_t a, std::uint32_t b) const noexcept { return add(a, neg(b)); }
  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const noexcept {
    if (d_ == 1) return static_cast<std::uint32_t>(static_cast<std::uint64_t>(a) * b % p_);
    if (a == 0 || b == 0) return 0;
    std::uint32_t s = log_[a] + log_[b];
    if (s >= q_ - 1) s -= q_ - 1;
    return exp_[s];
  }
  std::uint32_t inv(std::uint32_t a) const;
  std::uint32_t pow(std::uint32_t a, std::uint64_t n) const noexcept;
  std::uint32_t frobenius(std::uint32_t a) const noexcept { return pow(a, p_); }
  /// The unique b with b^p = a.
  std::uint32_t frobenius_inverse(std::uint32_t a) const noexcept;
  /// Exponent k with g^k = a, or -1 when a is not a power of g.
  long long log_generator(std::uint32_t a) const noexcept;

  std::uint32_t digit(std::uint32_t a, unsigned i) const noexcept;

 private:
  Field(std::uint32_t p, unsigned d, std::vector<std::uint32_t> modulus);

  std::uint32_t add_digits(std::uint32_t a, std::uint32_t b) const noexcept;
  std::uint32_t neg_digits(std::uint32_t a) const noexcept;
  std::uint32_t mul_slow(std::uint32_t a, std::uint32_t b) const;

  std::uint32_t p_;
  unsigned d_;
  std::uint32_t q_;
  std::vector<std::uint32_t> modulus_;
  std::vector<std::uint32_t> pw_;  // p^i
  std::vector<std::uint32_t> log_;
  std::vector<std::uint32_t> exp_;
  std::uint32_t prim_ = 1;         // primitive element used by the tables
  std::vector<long long> glog_;    // discrete log base g
  bool g_primitive_ = false;
};

/// Element of an interned field. A default constructed Fq has no field and is
/// only good as a placeholder.
class Fq {
 public:
  Fq() = default;
  Fq(const Field& field, std::uint32_t code) : field_(&field), code_(code) {}

  const Field& field() const noexcept { return *field_; }
  bool has_field() const noexcept { return field_ != nullptr; }
  std::uint32_t code() const noexcept { return code_; }
  bool is_zero() const noexcept { return code_ == 0; }
  bool is_one() const noexcept { return code_ == 1; }

  Fq inverse() const { return {*field_, field_->inv(code_)}; }
  Fq pow(std::uint64_t n) const { return {*field_, field_->pow(code_, n)}; }
  Fq frobenius_inverse() const { return {*field_, field_->frobenius_inverse(code_)}; }

  friend Fq operator+(Fq a, Fq b) { return {*a.field_, a.field_->add(a.code_, b.code_)}; }
  friend Fq operator-(Fq a, Fq b) { return {*a.field_, a.field_->sub(a.code_, b.code_)}; }
  friend Fq operator*(Fq a, Fq b) { return {*a.field_, a.field_->mul(a.code_, b.code_)}; }
  friend Fq operator/(Fq a, Fq b) { return a * b.inverse(); }
  Fq operator-() const { return {*field_, field_->neg(code_)}; }
  Fq& operator+=(Fq b) { return *this = *this + b; }
  Fq& operator-=(Fq b) { return *this = *this - b; }
  Fq& operator*=(Fq b) { return *this = *this * b; }
  friend bool operator==(Fq a, Fq b) noexcept { return a.code_ == b.code_ && a.field_ == b.field_; }
  friend bool operator!=(Fq a, Fq b) noexcept { return !(a == b); }

 private:
  const Field* field_ = nullptr;
  std::uint32_t code_ = 0;
};

bool is_prime(std::uint64_t n) noexcept;

/// C(n, k) mod p by Lucas' theorem.
std::uint32_t binom_mod_p(std::uint64_t n, std::uint64_t k, std::uint32_t p);

/// lambda_i = C(p, i) / p reduced mod p, for i = 1..p-1 (index 0 holds i = 1).
std::vector<std::uint32_t> lambda_coeffs(std::uint32_t p);

}  // namespace hsd
