#include "hsd/field.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <tuple>

namespace hsd {

namespace {

using PolyP = std::vector<std::uint32_t>;  // low to high over F_p

std::uint32_t inv_mod(std::uint32_t a, std::uint32_t p) {
  std::uint64_t result = 1, base = a % p;
  std::uint64_t e = p - 2;
  while (e) {
    if (e & 1) result = result * base % p;
    base = base * base % p;
    e >>= 1;
  }
  return static_cast<std::uint32_t>(result);
}

// Remainder of a modulo the monic polynomial m.
PolyP poly_rem(PolyP a, const PolyP& m, std::uint32_t p) {
  const std::size_t dm = m.size() - 1;
  while (a.size() > dm) {
    std::uint32_t lead = a.back();
    if (lead != 0) {
      std::size_t shift = a.size() - 1 - dm;
      for (std::size_t i = 0; i <= dm; ++i) {
        std::uint64_t t = static_cast<std::uint64_t>(lead) * m[i] % p;
        a[shift + i] = static_cast<std::uint32_t>((a[shift + i] + p - t) % p);
      }
    }
    a.pop_back();
  }
  return a;
}

bool poly_is_zero(const PolyP& a) {
  for (auto c : a)
    if (c) return false;
  return true;
}

bool is_irreducible(const PolyP& m, std::uint32_t p) {
  const unsigned d = static_cast<unsigned>(m.size() - 1);
  for (unsigned k = 1; k <= d / 2; ++k) {
    // every monic polynomial of degree k
    std::uint64_t count = 1;
    for (unsigned i = 0; i < k; ++i) count *= p;
    for (std::uint64_t idx = 0; idx < count; ++idx) {
      PolyP f(k + 1, 0);
      f[k] = 1;
      std::uint64_t t = idx;
      for (unsigned i = 0; i < k; ++i) {
        f[i] = static_cast<std::uint32_t>(t % p);
        t /= p;
      }
      if (poly_is_zero(poly_rem(m, f, p))) return false;
    }
  }
  return true;
}

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t f = 2; f * f <= n; ++f) {
    if (n % f == 0) {
      out.push_back(f);
      while (n % f == 0) n /= f;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

constexpr std::uint32_t kMaxTableSize = 1u << 22;

}  // namespace

bool is_prime(std::uint64_t n) noexcept {
  if (n < 2) return false;
  for (std::uint64_t f = 2; f * f <= n; ++f)
    if (n % f == 0) return false;
  return true;
}

const Field& Field::get(std::uint32_t p, unsigned d, std::vector<std::uint32_t> modulus) {
  if (!is_prime(p)) throw Error(ErrorKind::NotPrime, std::to_string(p) + " is not prime");
  if (d == 0) throw Error(ErrorKind::UnsupportedDegree, "extension degree must be positive");
  if (d > 4) throw Error(ErrorKind::UnsupportedDegree, "extension degree above 4 is not supported");
  if (d > 1) {
    std::uint64_t q = 1;
    for (unsigned i = 0; i < d; ++i) q *= p;
    if (q > kMaxTableSize) throw Error(ErrorKind::ResourceLimit, "field too large for log tables");
  } else if (p >= (1u << 31)) {
    throw Error(ErrorKind::ResourceLimit, "prime too large");
  }

  if (d == 1) {
    modulus = {0, 1};
  } else if (modulus.empty()) {
    std::uint64_t q = 1;
    for (unsigned i = 0; i < d; ++i) q *= p;
    for (std::uint64_t idx = 0; idx < q && modulus.empty(); ++idx) {
      PolyP m(d + 1, 0);
      m[d] = 1;
      std::uint64_t t = idx;
      for (unsigned i = 0; i < d; ++i) {
        m[i] = static_cast<std::uint32_t>(t % p);
        t /= p;
      }
      if (m[0] == 0 || !is_irreducible(m, p)) continue;
      // root primitive?
      bool primitive = true;
      for (auto r : prime_factors(q - 1)) {
        PolyP acc{1}, base{0, 1};
        std::uint64_t e = (q - 1) / r;
        while (e) {
          if (e & 1) {
            PolyP prod(acc.size() + base.size() - 1, 0);
            for (std::size_t i = 0; i < acc.size(); ++i)
              for (std::size_t j = 0; j < base.size(); ++j)
                prod[i + j] = static_cast<std::uint32_t>((prod[i + j] + static_cast<std::uint64_t>(acc[i]) * base[j]) % p);
            acc = poly_rem(prod, m, p);
          }
          PolyP sq(base.size() * 2 - 1, 0);
          for (std::size_t i = 0; i < base.size(); ++i)
            for (std::size_t j = 0; j < base.size(); ++j)
              sq[i + j] = static_cast<std::uint32_t>((sq[i + j] + static_cast<std::uint64_t>(base[i]) * base[j]) % p);
          base = poly_rem(sq, m, p);
          e >>= 1;
        }
        acc.resize(d, 0);
        bool is_one = acc[0] == 1;
        for (unsigned i = 1; i < d; ++i) is_one = is_one && acc[i] == 0;
        if (is_one) {
          primitive = false;
          break;
        }
      }
      if (primitive) modulus = m;
    }
  } else {
    if (modulus.size() != d + 1 || modulus.back() != 1)
      throw Error(ErrorKind::InvalidArgument, "modulus must be monic of degree d");
    for (auto& c : modulus) {
      if (c >= p) throw Error(ErrorKind::InvalidArgument, "modulus coefficient out of range");
    }
    if (!is_irreducible(modulus, p))
      throw Error(ErrorKind::ReducibleModulus, "modulus is reducible over F_" + std::to_string(p));
  }

  static std::mutex mutex;
  static std::map<std::tuple<std::uint32_t, unsigned, std::vector<std::uint32_t>>, std::unique_ptr<Field>> registry;
  std::lock_guard<std::mutex> lock(mutex);
  auto key = std::make_tuple(p, d, modulus);
  auto it = registry.find(key);
  if (it != registry.end()) return *it->second;
  std::unique_ptr<Field> field(new Field(p, d, modulus));
  const Field& ref = *field;
  registry.emplace(std::move(key), std::move(field));
  return ref;
}

Field::Field(std::uint32_t p, unsigned d, std::vector<std::uint32_t> modulus)
    : p_(p), d_(d), q_(1), modulus_(std::move(modulus)) {
  for (unsigned i = 0; i < d; ++i) {
    pw_.push_back(q_);
    q_ *= p;
  }
  if (d_ == 1) {
    g_primitive_ = false;
    return;
  }
  // find a primitive element and build log/exp tables
  const auto factors = prime_factors(q_ - 1);
  auto order_is_full = [&](std::uint32_t a) {
    for (auto r : factors) {
      std::uint64_t e = (q_ - 1) / r;
      std::uint32_t acc = 1, base = a;
      while (e) {
        if (e & 1) acc = mul_slow(acc, base);
        base = mul_slow(base, base);
        e >>= 1;
      }
      if (acc == 1) return false;
    }
    return true;
  };
  for (std::uint32_t a = 2; a < q_; ++a) {
    if (order_is_full(a)) {
      prim_ = a;
      break;
    }
  }
  log_.assign(q_, 0);
  exp_.assign(q_ - 1, 0);
  std::uint32_t x = 1;
  for (std::uint32_t k = 0; k + 1 < q_; ++k) {
    exp_[k] = x;
    log_[x] = k;
    x = mul_slow(x, prim_);
  }
  // discrete logs relative to g (code p)
  glog_.assign(q_, -1);
  x = 1;
  for (long long k = 0; k + 1 < static_cast<long long>(q_); ++k) {
    if (glog_[x] != -1) break;
    glog_[x] = k;
    x = mul(x, p_);
  }
  g_primitive_ = order_is_full(p_);
}

std::uint32_t Field::add_digits(std::uint32_t a, std::uint32_t b) const noexcept {
  std::uint32_t out = 0;
  for (unsigned i = 0; i < d_; ++i) {
    std::uint32_t s = a % p_ + b % p_;
    if (s >= p_) s -= p_;
    out += s * pw_[i];
    a /= p_;
    b /= p_;
  }
  return out;
}

std::uint32_t Field::neg_digits(std::uint32_t a) const noexcept {
  std::uint32_t out = 0;
  for (unsigned i = 0; i < d_; ++i) {
    std::uint32_t c = a % p_;
    out += (c == 0 ? 0 : p_ - c) * pw_[i];
    a /= p_;
  }
  return out;
}

std::uint32_t Field::mul_slow(std::uint32_t a, std::uint32_t b) const {
  PolyP pa(d_), pb(d_);
  for (unsigned i = 0; i < d_; ++i) {
    pa[i] = a % p_;
    a /= p_;
    pb[i] = b % p_;
    b /= p_;
  }
  PolyP prod(2 * d_ - 1, 0);
  for (unsigned i = 0; i < d_; ++i)
    for (unsigned j = 0; j < d_; ++j)
      prod[i + j] = static_cast<std::uint32_t>((prod[i + j] + static_cast<std::uint64_t>(pa[i]) * pb[j]) % p_);
  PolyP r = poly_rem(prod, modulus_, p_);
  r.resize(d_, 0);
  std::uint32_t out = 0;
  for (unsigned i = 0; i < d_; ++i) out += r[i] * pw_[i];
  return out;
}

std::uint32_t Field::inv(std::uint32_t a) const {
  if (a == 0) throw Error(ErrorKind::DivisionByZero, "inverse of zero");
  if (d_ == 1) return inv_mod(a, p_);
  std::uint32_t l = log_[a];
  return exp_[l == 0 ? 0 : q_ - 1 - l];
}

std::uint32_t Field::pow(std::uint32_t a, std::uint64_t n) const noexcept {
  if (n == 0) return 1;
  if (a == 0) return 0;
  if (d_ > 1) {
    std::uint64_t e = (static_cast<std::uint64_t>(log_[a]) * (n % (q_ - 1))) % (q_ - 1);
    return exp_[e];
  }
  std::uint32_t result = 1, base = a;
  while (n) {
    if (n & 1) result = mul(result, base);
    base = mul(base, base);
    n >>= 1;
  }
  return result;
}

std::uint32_t Field::frobenius_inverse(std::uint32_t a) const noexcept {
  std::uint32_t x = a;
  for (unsigned i = 1; i < d_; ++i) x = pow(x, p_);
  return x;
}

long long Field::log_generator(std::uint32_t a) const noexcept {
  if (d_ == 1 || a == 0) return a == 1 ? 0 : -1;
  return glog_[a];
}

std::uint32_t Field::digit(std::uint32_t a, unsigned i) const noexcept {
  if (i >= d_) return 0;
  return (a / pw_[i]) % p_;
}

Fq Field::zero() const { return {*this, 0}; }
Fq Field::one() const { return {*this, 1}; }
Fq Field::element(std::uint32_t code) const {
  if (code >= q_) throw Error(ErrorKind::InvalidArgument, "field element code out of range");
  return {*this, code};
}
Fq Field::from_int(long long value) const {
  long long r = value % static_cast<long long>(p_);
  if (r < 0) r += p_;
  return {*this, static_cast<std::uint32_t>(r)};
}
Fq Field::generator() const {
  if (d_ == 1) throw Error(ErrorKind::InvalidArgument, "prime field has no extension generator");
  return {*this, p_};
}

std::uint32_t binom_mod_p(std::uint64_t n, std::uint64_t k, std::uint32_t p) {
  if (!is_prime(p)) throw Error(ErrorKind::NotPrime, std::to_string(p) + " is not prime");
  if (k > n) return 0;
  std::uint64_t result = 1;
  while (n || k) {
    std::uint64_t a = n % p, b = k % p;
    if (b > a) return 0;
    std::uint64_t num = 1, den = 1;
    for (std::uint64_t i = 0; i < b; ++i) {
      num = num * ((a - i) % p) % p;
      den = den * ((i + 1) % p) % p;
    }
    result = result * num % p * inv_mod(static_cast<std::uint32_t>(den), p) % p;
    n /= p;
    k /= p;
  }
  return static_cast<std::uint32_t>(result);
}

std::vector<std::uint32_t> lambda_coeffs(std::uint32_t p) {
  if (!is_prime(p)) throw Error(ErrorKind::NotPrime, std::to_string(p) + " is not prime");
  std::vector<std::uint32_t> out;
  if (p <= 127) {
    // exact integer row of Pascal's triangle
    std::vector<unsigned __int128> row(p + 1, 0);
    row[0] = 1;
    for (std::uint32_t n = 1; n <= p; ++n)
      for (std::uint32_t i = n; i >= 1; --i) row[i] += row[i - 1];
    for (std::uint32_t i = 1; i < p; ++i)
      out.push_back(static_cast<std::uint32_t>((row[i] / p) % p));
    return out;
  }
  // C(p, i)/p = C(p-1, i-1)/i = (-1)^(i-1)/i mod p
  for (std::uint32_t i = 1; i < p; ++i) {
    std::uint32_t v = inv_mod(i, p);
    out.push_back((i % 2 == 1) ? v : p - v);
  }
  return out;
}

}  // namespace hsd
