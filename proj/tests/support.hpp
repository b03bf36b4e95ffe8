#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "hsd/canonical_basis.hpp"
#include "hsd/poly_text.hpp"

namespace hsd::test {

/// Kind of the hsd::Error thrown by f, nullopt when nothing is thrown.
template <class F>
std::optional<ErrorKind> error_kind(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return std::nullopt;
}

inline std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  unsigned __int128 r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return static_cast<std::uint64_t>(r);
}

/// binom(p, k) / p mod p, straight from integer binomials.
inline std::uint64_t lambda(std::uint64_t p, std::uint64_t k) { return binomial(p, k) / p % p; }

inline std::uint64_t ipow(std::uint64_t b, unsigned n) {
  std::uint64_t r = 1;
  while (n--) r *= b;
  return r;
}

/// x_{j+1} plus up to three random monomials of degree >= 2 with exponents
/// below bound, in the text syntax.
inline std::string random_automorphism(std::mt19937_64& g, unsigned p, unsigned e, std::uint32_t bound, unsigned j) {
  std::uniform_int_distribution<unsigned> coef(0, p - 1), ex(0, bound - 1);
  std::string s = "x" + std::to_string(j + 1);
  for (int t = 0; t < 3; ++t) {
    std::string mono = std::to_string(coef(g));
    unsigned deg = 0;
    for (unsigned l = 0; l < e; ++l) {
      unsigned k = ex(g);
      deg += k;
      mono += "*x" + std::to_string(l + 1) + "^" + std::to_string(k);
    }
    if (deg >= 2) s += " + " + mono;
  }
  return s;
}

inline std::vector<std::string> random_phi(std::mt19937_64& g, const HSDerivation& d) {
  std::vector<std::string> phi;
  for (unsigned j = 0; j < d.model()->e(); ++j)
    phi.push_back(random_automorphism(g, d.model()->p(), d.model()->e(), d.model()->bound(), j));
  return phi;
}

inline Fq random_element(std::mt19937_64& g, const Field& k) {
  return k.element(std::uniform_int_distribution<std::uint32_t>(0, k.q() - 1)(g));
}

inline std::vector<Fq> random_alphas(std::mt19937_64& g, const Field& k, unsigned n) {
  std::vector<Fq> a;
  for (unsigned i = 0; i < n; ++i) a.push_back(random_element(g, k));
  return a;
}

/// The literal p-fold composition of a matrix with itself.
inline Matrix p_fold(const Matrix& m, std::uint32_t p) {
  Matrix r = m;
  for (std::uint32_t i = 1; i < p; ++i) r = r * m;
  return r;
}

/// Coefficient of w^i in F_j(z, w), evaluated at the elements z of the model:
/// what D_i(z_j) must be when z is a canonical basis.
inline Vector embedding_value(const ArtinianModel& a, const FormalGroupLaw& law, const std::vector<Vector>& z,
                              std::size_t j, const MultiIndex& i) {
  const RingLayout& l = *law.layout();
  const unsigned e = law.e();
  Vector out = a.constant(a.field().zero());
  for (const auto& [key, c] : law.components()[j].terms()) {
    bool match = true;
    for (unsigned t = 0; t < e; ++t) match = match && l.exponent(key, e + t) == i[t];
    if (!match) continue;
    Vector term = a.constant(c);
    for (unsigned t = 0; t < e; ++t) term = a.multiply(term, a.power(z[t], l.exponent(key, t)));
    out.axpy(a.field().one(), term);
  }
  return out;
}

}  // namespace hsd::test
