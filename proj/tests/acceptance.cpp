// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "hsd/cli.hpp"
#include "hsd/wronskian_field.hpp"
#include "support.hpp"

using namespace hsd;
using namespace hsd::test;

namespace {

struct Result {
  bool pass = true;
  std::size_t cases = 0;
  std::string detail;
  void check(bool ok, const std::string& what) {
    ++cases;
    if (!ok && pass) detail = what;
    pass = pass && ok;
  }
};

std::string law_name(const FormalGroupLaw& law) {
  std::string s = to_string(law.kind()) + " p=" + std::to_string(law.p()) + " d=" + std::to_string(law.field().d()) +
                  " m=" + std::to_string(law.m());
  if (!law.alphas().empty()) {
    s += " alpha=(";
    for (std::size_t i = 0; i < law.alphas().size(); ++i) s += (i ? "," : "") + to_string(law.alphas()[i]);
    s += ")";
  }
  return s;
}

// Unit, associativity and commutativity by explicit substitution into a
// three-block ring u, v, w.
Result axioms_by_substitution(const FormalGroupLaw& law) {
  Result r;
  const unsigned e = law.e();
  const std::uint32_t b = law.bound();
  const Field& k = law.field();
  const auto& F = law.components();
  LayoutPtr uvw = RingLayout::make({{"u", e, b}, {"v", e, b}, {"w", e, b}});
  auto var = [&](const LayoutPtr& l, const std::string& n) { return Poly::variable(l, *l->find_var(n), k.one()); };
  std::map<std::string, Poly> uv;
  for (unsigned t = 1; t <= e; ++t) {
    std::string s = std::to_string(t);
    uv.emplace("v" + s, var(uvw, "u" + s));
    uv.emplace("w" + s, var(uvw, "v" + s));
  }
  std::vector<Poly> Fuv, Fvw;
  for (const auto& c : F) {
    Fuv.push_back(substitute(c, uv, uvw));
    Fvw.push_back(remap_by_name(c, uvw));
  }
  const LayoutPtr& vw = law.layout();
  for (unsigned j = 0; j < e; ++j) {
    std::map<std::string, Poly> left, right, comm, zero_w, zero_v;
    for (unsigned t = 1; t <= e; ++t) {
      std::string s = std::to_string(t);
      left.emplace("v" + s, Fuv[t - 1]);
      right.emplace("v" + s, var(uvw, "u" + s));
      right.emplace("w" + s, Fvw[t - 1]);
      comm.emplace("v" + s, var(vw, "w" + s));
      comm.emplace("w" + s, var(vw, "v" + s));
      zero_w.emplace("w" + s, zero_poly(vw, k));
      zero_v.emplace("v" + s, zero_poly(vw, k));
    }
    std::string s = std::to_string(j + 1);
    r.check(substitute(F[j], zero_w, vw) == var(vw, "v" + s), law_name(law) + ": F(v,0) != v");
    r.check(substitute(F[j], zero_v, vw) == var(vw, "w" + s), law_name(law) + ": F(0,w) != w");
    r.check(substitute(F[j], left, uvw) == substitute(F[j], right, uvw), law_name(law) + ": not associative");
    r.check(substitute(F[j], comm, vw) == F[j], law_name(law) + ": not commutative");
  }
  return r;
}

void merge(Result& into, const Result& r) {
  if (!r.pass && into.pass) into.detail = r.detail;
  into.pass = into.pass && r.pass;
  into.cases += r.cases;
}

std::vector<LawPtr> constructor_laws(const Field& k, unsigned m, std::mt19937_64& g, bool products = true) {
  std::vector<LawPtr> laws{FormalGroupLaw::additive(k, 1, m), FormalGroupLaw::additive(k, 2, m),
                           FormalGroupLaw::multiplicative(k, m), FormalGroupLaw::witt2(k, m, random_alphas(g, k, m))};
  if (products) {
    laws.push_back(FormalGroupLaw::product({FormalGroupLaw::additive(k, 1, m), FormalGroupLaw::multiplicative(k, m)}));
    laws.push_back(FormalGroupLaw::product({FormalGroupLaw::multiplicative(k, m), FormalGroupLaw::multiplicative(k, m)}));
  }
  return laws;
}

// 1. Axioms for every constructor and product.
Result criterion_1() {
  Result r;
  std::mt19937_64 g(101);
  for (unsigned p : {2u, 3u, 5u})
    for (unsigned d : {1u, 2u})
      for (unsigned m : {1u, 2u}) {
        const Field& k = Field::get(p, d);
        auto laws = constructor_laws(k, m, g);
        laws.push_back(FormalGroupLaw::product({FormalGroupLaw::witt2(k, m, random_alphas(g, k, m)),
                                                FormalGroupLaw::multiplicative(k, m)}));
        for (const auto& law : laws) {
          merge(r, axioms_by_substitution(*law));
          LawAxiomsReport a = check_axioms(*law);
          r.check(a.unit_left && a.unit_right && a.associative && a.commutative, law_name(*law) + ": check_axioms");
        }
      }
  return r;
}

Poly closed_form_pseries(const FormalGroupLaw& law) {
  const Field& k = law.field();
  const std::uint32_t p = law.p();
  Poly v2 = variable_poly(law.v_layout(), k, 1);
  Poly out = zero_poly(law.v_layout(), k);
  unsigned top = std::min<unsigned>(static_cast<unsigned>(law.alphas().size()), law.m());
  for (unsigned n = 0; n < top; ++n) out = out - v2.pow(ipow(p, n + 1)) * law.alphas()[n];
  return out;
}

// 2. [p]_F of witt2 against the closed form.
Result criterion_2() {
  Result r;
  std::mt19937_64 g(202);
  for (unsigned p : {2u, 3u})
    for (unsigned m : {1u, 2u}) {
      const Field& k = Field::get(p);
      std::vector<std::vector<Fq>> alphas;
      for (std::uint64_t code = 0; code < ipow(p, m); ++code) {
        std::vector<Fq> a;
        for (unsigned n = 0, c = static_cast<unsigned>(code); n < m; ++n, c /= p) a.push_back(k.from_int(c % p));
        alphas.push_back(a);
      }
      for (const auto& a : alphas) {
        auto law = FormalGroupLaw::witt2(k, m, a);
        auto s = n_series(*law, p);
        r.check(s[0] == closed_form_pseries(*law) && s[1].is_zero(), law_name(*law));
      }
      const Field& k2 = Field::get(p, 2);
      for (int t = 0; t < 8; ++t) {
        auto law = FormalGroupLaw::witt2(k2, m, random_alphas(g, k2, m));
        auto s = n_series(*law, p);
        r.check(s[0] == closed_form_pseries(*law) && s[1].is_zero(), law_name(*law));
      }
    }
  return r;
}

// 3. p_fold_evP against literal p-fold composition.
Result criterion_3() {
  Result r;
  std::mt19937_64 g(303);
  for (unsigned p : {2u, 3u})
    for (unsigned m : {1u, 2u}) {
      const Field& k = Field::get(p);
      for (const auto& law : constructor_laws(k, m, g)) {
        auto d = HSDerivation::canonical(law);
        for (const auto& dd : {d, twist_by_automorphism(d, random_phi(g, d))}) {
          auto ev = p_fold_evP(dd);
          for (std::size_t i = 0; i < ev.size(); ++i)
            r.check(ev[i] == p_fold(dd.component(i), p), law_name(*law) + " at " + index_text(dd.indices()[i]));
        }
      }
    }
  return r;
}

// multinomial(s; parts) mod p
std::uint64_t multinomial_mod(const std::vector<unsigned>& parts, std::uint64_t p) {
  std::uint64_t s = 0, r = 1;
  for (unsigned x : parts) {
    s += x;
    r = r * (binomial(s, x) % p) % p;
  }
  return r;
}

// 4. The p-fold compositions of witt2 components.
Result criterion_4() {
  Result r;
  for (unsigned p : {2u, 3u}) {
    const unsigned m = 2;
    const Field& k = Field::get(p);
    for (std::uint64_t code = 0; code < ipow(p, m); ++code) {
      std::vector<Fq> a;
      for (unsigned n = 0, c = static_cast<unsigned>(code); n < m; ++n, c /= p) a.push_back(k.from_int(c % p));
      auto law = FormalGroupLaw::witt2(k, m, a);
      auto d = HSDerivation::canonical(law);
      const IndexSet& box = d.indices();
      const unsigned top = m - 1;
      for (std::size_t f = 0; f < box.size(); ++f) {
        const MultiIndex& ij = box[f];
        Matrix lit = p_fold(d.component(f), p);
        if (ij[0] != 0) {
          r.check(lit.is_zero(), law_name(*law) + ": D^(p) nonzero at " + index_text(ij));
          continue;
        }
        const std::uint32_t j = ij[1];
        if (j > ipow(p, m - 1)) continue;
        // beta_s = sum over i_0 + i_1 p + ... = j with sum i = s
        std::vector<Fq> beta(j + 1, k.zero());
        std::vector<unsigned> parts(top + 1, 0);
        std::function<void(unsigned, std::uint32_t)> rec = [&](unsigned n, std::uint32_t rest) {
          if (n > top) {
            if (rest != 0) return;
            unsigned s = 0;
            Fq c = k.from_int(static_cast<long long>(multinomial_mod(parts, p)));
            for (unsigned t = 0; t <= top; ++t) {
              s += parts[t];
              for (unsigned u = 0; u < parts[t]; ++u) c = c * law->alpha(t);
            }
            if (s % 2 == 1) c = -c;
            beta[s] = beta[s] + c;
            return;
          }
          const std::uint64_t w = ipow(p, n);
          for (std::uint32_t x = 0; x * w <= rest; ++x) {
            parts[n] = x;
            rec(n + 1, static_cast<std::uint32_t>(rest - x * w));
          }
          parts[n] = 0;
        };
        rec(0, j);
        Matrix expect(k, d.model()->dim(), d.model()->dim());
        for (std::uint32_t s = 0; s <= j; ++s) expect.axpy(beta[s], d.component(MultiIndex{s, 0}));
        r.check(lit == expect, law_name(*law) + ": multinomial formula fails at " + index_text(ij));
        for (unsigned l = 0; l <= top; ++l)
          if (j == ipow(p, l)) r.check(beta[1] == -law->alpha(l), law_name(*law) + ": D_(1,0) coefficient");
      }
    }
  }
  return r;
}

// c^k_{ij} read off from the powers of F, computed here.
std::vector<std::vector<std::pair<std::size_t, Fq>>> structure_table(const FormalGroupLaw& law) {
  const IndexSet& box = law.indices();
  const RingLayout& l = *law.layout();
  const unsigned e = law.e();
  std::vector<std::vector<std::pair<std::size_t, Fq>>> out(box.size() * box.size());
  for (std::size_t kf = 0; kf < box.size(); ++kf) {
    Poly pk = constant_poly(law.layout(), law.field().one());
    for (unsigned t = 0; t < e; ++t) pk = pk * law.components()[t].pow(box[kf][t]);
    for (const auto& [key, c] : pk.terms()) {
      MultiIndex i(e), j(e);
      for (unsigned t = 0; t < e; ++t) {
        i[t] = l.exponent(key, t);
        j[t] = l.exponent(key, e + t);
      }
      out[box.flat(i) * box.size() + box.flat(j)].emplace_back(kf, c);
    }
  }
  return out;
}

// 5. Composition against structure constants; reconstruction from p-powers.
Result criterion_5() {
  Result r;
  std::mt19937_64 g(505);
  for (unsigned p : {2u, 3u})
    for (unsigned m : {1u, 2u}) {
      const Field& k = Field::get(p);
      for (const auto& law : constructor_laws(k, m, g, false)) {
        auto table = structure_table(*law);
        auto d = HSDerivation::canonical(law);
        for (const auto& dd : {d, twist_by_automorphism(d, random_phi(g, d))}) {
          const auto& mats = dd.components();
          const std::size_t n = mats.size();
          bool all = true;
          std::string where;
          for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
              Matrix combo(k, dd.model()->dim(), dd.model()->dim());
              for (const auto& [kf, c] : table[i * n + j]) combo.axpy(c, mats[kf]);
              if (compose(dd, dd.indices()[j], dd.indices()[i]) != combo && all) {
                all = false;
                where = index_text(dd.indices()[j]) + " o " + index_text(dd.indices()[i]);
              }
            }
          r.check(all, law_name(*law) + ": composition differs at " + where);
          try {
            r.check(reconstruct_from_ppowers(dd).components() == mats, law_name(*law) + ": reconstruction differs");
          } catch (const Error& e) {
            r.check(false, law_name(*law) + ": " + e.what());
          }
        }
      }
    }
  return r;
}

// 6. Tower dimensions and kernel containments.
Result criterion_6() {
  Result r;
  std::mt19937_64 g(606);
  for (unsigned p : {2u, 3u})
    for (unsigned m : {1u, 2u}) {
      const Field& k = Field::get(p);
      auto laws = constructor_laws(k, m, g);
      if (p == 2) laws.push_back(FormalGroupLaw::product({FormalGroupLaw::witt2(k, m, random_alphas(g, k, m)),
                                                          FormalGroupLaw::multiplicative(k, m)}));
      for (const auto& law : laws) {
        ConstantsTower t = tower(HSDerivation::canonical(law));
        const std::uint64_t pe = ipow(p, law->e());
        for (std::size_t s = 0; s + 1 < t.dims.size(); ++s)
          r.check(t.dims[s] == pe * t.dims[s + 1], law_name(*law) + ": dimension ratio at level " + std::to_string(s));
        r.check(t.dims.back() * ipow(p, law->e() * m) == t.dims.front(), law_name(*law) + ": bottom level");
      }
    }
  {
    const Field& k = Field::get(2);
    ConstantsTower t = tower(HSDerivation::canonical(FormalGroupLaw::witt2(k, 2, {k.one()})));
    r.check(t.dims == std::vector<std::size_t>{16, 4, 1}, "witt2 p=2 m=2 dims differ from (16, 4, 1)");
  }
  for (unsigned p : {2u, 3u}) {
    const unsigned m = 2;
    const Field& k = Field::get(p);
    for (int trial = 0; trial < 3; ++trial) {
      auto law = FormalGroupLaw::witt2(k, m, random_alphas(g, k, m));
      auto d = HSDerivation::canonical(law);
      for (const auto& dd : {d, twist_by_automorphism(d, random_phi(g, d))})
        for (unsigned n = 0; n < m; ++n) {
          Subspace fn = tower_level(dd, static_cast<int>(n));
          const std::uint64_t lim = ipow(p, n + 1);
          for (const auto& ij : dd.indices().items()) {
            if ((ij[0] == 0 && ij[1] == 0) || ij[0] >= lim || ij[1] >= lim) continue;
            r.check(kernel_component(dd, ij).contains(fn),
                    law_name(*law) + ": F_" + std::to_string(n) + " not inside C_" + index_text(ij));
          }
        }
    }
  }
  return r;
}

// 7. find_y / find_x on twisted canonical witt2 derivations.
Result criterion_7() {
  Result r;
  std::mt19937_64 g(707);
  for (unsigned p : {2u, 3u})
    for (unsigned m : {1u, 2u}) {
      const Field& k = Field::get(p);
      for (int trial = 0; trial < 50; ++trial) {
        std::vector<Fq> alphas = trial == 0 ? std::vector<Fq>(m, k.zero()) : random_alphas(g, k, m);
        auto law = FormalGroupLaw::witt2(k, m, alphas);
        auto base = HSDerivation::canonical(law);
        auto phi = random_phi(g, base);
        std::string tag = law_name(*law) + " phi=(" + phi[0] + ", " + phi[1] + ")";
        try {
          auto d = twist_by_automorphism(base, phi);
          const ArtinianModel& a = *d.model();
          Vector y = find_y(d);
          Vector x = find_x(d, y);
          bool ok = true;
          for (const auto& ij : d.indices().items()) {
            Vector ey = a.constant(k.zero()), ex = a.constant(k.zero());
            if (ij[0] == 0 && ij[1] == 0) {
              ey = y;
              ex = x;
            } else if (ij[0] == 0 && ij[1] == 1) {
              ey = a.one();
            }
            if (ij[0] == 1 && ij[1] == 0) ex = a.one();
            if (ij[0] == 0) {
              for (unsigned l = 0; l < m && l < alphas.size(); ++l)
                for (unsigned kk = 1; kk < p; ++kk)
                  if (ij[1] == kk * ipow(p, l))
                    ex = a.power(y, (p - kk) * ipow(p, l)) * (alphas[l] * k.from_int(static_cast<long long>(lambda(p, kk))));
            }
            ok = ok && d.component_apply(ij, y) == ey && d.component_apply(ij, x) == ex;
            ok = ok && ex == embedding_value(a, *law, {x, y}, 0, ij) && ey == embedding_value(a, *law, {x, y}, 1, ij);
          }
          r.check(ok, tag + ": tables differ");
          r.check(verify_canonical_basis(d, *law, {x, y}).pass, tag + ": verification fails");
        } catch (const Error& e) {
          r.check(false, tag + ": " + e.what());
        }
      }
    }
  return r;
}

// 8. Product assembly.
Result criterion_8() {
  Result r;
  std::mt19937_64 g(808);
  const Field& k = Field::get(2);
  for (unsigned m : {1u, 2u}) {
    std::vector<LawPtr> laws{
        FormalGroupLaw::product({FormalGroupLaw::additive(k, 1, m), FormalGroupLaw::additive(k, 1, m)}),
        FormalGroupLaw::product({FormalGroupLaw::additive(k, 1, m), FormalGroupLaw::multiplicative(k, m)}),
        FormalGroupLaw::product({FormalGroupLaw::witt2(k, m, {k.one(), k.one()}), FormalGroupLaw::multiplicative(k, m)}),
        FormalGroupLaw::product({FormalGroupLaw::witt2(k, m, {k.zero(), k.one()}), FormalGroupLaw::multiplicative(k, m)}),
    };
    for (const auto& law : laws) {
      auto base = HSDerivation::canonical(law);
      for (int trial = 0; trial < 3; ++trial) {
        auto phi = trial == 0 ? std::vector<std::string>{} : random_phi(g, base);
        std::string tag = law_name(*law) + (phi.empty() ? " untwisted" : " phi=" + phi[0]);
        try {
          auto d = phi.empty() ? base : twist_by_automorphism(base, phi);
          BasisCandidate z = assemble_product_basis(d);
          bool ok = z.size() == law->e();
          for (std::size_t j = 0; ok && j < z.size(); ++j)
            for (const auto& i : d.indices().items())
              ok = ok && d.component_apply(i, z[j]) == embedding_value(*d.model(), *law, z, j, i);
          r.check(ok, tag + ": embedding condition fails");
          r.check(verify_canonical_basis(d, *law, z).pass, tag + ": verification fails");
        } catch (const Error& e) {
          r.check(false, tag + ": " + e.what());
        }
      }
    }
  }
  return r;
}

// 9. Wronskian dependence.
Result criterion_9() {
  Result r;
  std::mt19937_64 g(909);
  for (unsigned p : {2u, 3u}) {
    const Field& k = Field::get(p);
    std::vector<LawPtr> laws{FormalGroupLaw::additive(k, 1, 1), FormalGroupLaw::multiplicative(k, 1),
                             FormalGroupLaw::additive(k, 2, 1), FormalGroupLaw::witt2(k, 1, {k.one()}),
                             FormalGroupLaw::product({FormalGroupLaw::additive(k, 1, 1), FormalGroupLaw::multiplicative(k, 1)})};
    for (const auto& law : laws) {
      FieldDerivationContext ctx(law);
      const unsigned e = law->e();
      const std::string tag = law_name(*law);
      auto poly = [&](const std::string& s) { return ctx.parse(s); };
      auto random_poly = [&](unsigned deg, bool p_powers) {
        std::string s = "0";
        std::uniform_int_distribution<unsigned> c(0, p - 1), x(0, deg);
        for (int t = 0; t < 4; ++t) {
          s += " + " + std::to_string(c(g));
          for (unsigned v = 1; v <= e; ++v) s += "*x" + std::to_string(v) + "^" + std::to_string(x(g) * (p_powers ? p : 1));
        }
        return poly(s);
      };
      // monomials x^a for a in [p]^e are independent
      std::vector<RationalFunc> gens;
      const IndexSet small(e, p);
      for (const auto& a : small.items()) {
        std::string s = "1";
        for (unsigned v = 0; v < e; ++v) s += "*x" + std::to_string(v + 1) + "^" + std::to_string(a[v]);
        gens.push_back(poly(s));
      }
      auto ind = dependence_test(ctx, gens);
      r.check(!ind.dependent && ind.rank == gens.size(), tag + ": monomial family reported dependent");

      auto check_witness = [&](const std::vector<RationalFunc>& fs, const DependenceResult& res, const std::string& what) {
        r.check(res.dependent, tag + ": " + what + " reported independent");
        if (!res.dependent) return;
        bool nonzero = false;
        for (const auto& w : res.witness) nonzero = nonzero || !w.is_zero();
        r.check(nonzero && res.witness.size() <= fs.size(), tag + ": " + what + " witness is empty");
        RatMatrix wm = wronskian_matrix(ctx, fs);
        for (const auto& row : wm) {
          RationalFunc acc = RationalFunc::zero(k, ctx.vars());
          for (std::size_t j = 0; j < res.witness.size(); ++j) acc += row[j] * res.witness[j];
          r.check(acc.is_zero(), tag + ": " + what + " witness does not annihilate");
        }
        for (const auto& w : res.witness) {
          auto dw = ctx.apply(w, p);
          for (std::size_t i = 1; i < dw.size(); ++i) r.check(dw[i].is_zero(), tag + ": " + what + " witness not constant");
        }
      };
      for (int trial = 0; trial < 3; ++trial) {
        // constant combinations of fewer elements
        std::vector<RationalFunc> base{(random_poly(3, false) + poly("x1")) / (random_poly(1, false) * poly("x1") + poly("1")),
                                       random_poly(3, false) + poly("1")};
        std::vector<RationalFunc> fs = base;
        fs.push_back(base[0] * random_poly(1, true) + base[1] * random_poly(1, true));
        check_witness(fs, dependence_test(ctx, fs), "constant combination");
        // p^e + 1 elements
        std::vector<RationalFunc> many;
        for (std::uint64_t t = 0; t <= ipow(p, e); ++t) many.push_back(random_poly(2 * p, false));
        check_witness(many, dependence_test(ctx, many), "p^e + 1 elements");
      }
    }
  }
  return r;
}

// 10. Truncating the canonical derivation equals the canonical derivation of the truncated law.
Result criterion_10() {
  Result r;
  std::mt19937_64 g(1010);
  for (auto [p, m] : {std::pair{2u, 2u}, {2u, 3u}, {3u, 2u}}) {
    const Field& k = Field::get(p);
    for (const auto& law : constructor_laws(k, m, g))
      for (unsigned mp = 1; mp < m; ++mp) {
        auto a = truncate_derivation(HSDerivation::canonical(law), mp);
        auto b = HSDerivation::canonical(truncate_law(law, mp));
        r.check(a.components() == b.components(), law_name(*law) + ": m'=" + std::to_string(mp));
      }
  }
  return r;
}

// 11. CLI determinism.
Result criterion_11() {
  Result r;
  auto st = cli::run_job(R"({"command":"selftest"})", 4);
  r.check(st.exit_code == 0, "selftest exits " + std::to_string(st.exit_code) + ": " + st.summary);
  r.check(cli::run_job(R"({"command":"selftest"})", 1).report == st.report, "selftest report depends on thread count");
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(HSD_CONFIG_DIR))
    if (entry.path().extension() == ".json") files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  r.check(!files.empty(), "no configs found");
  for (const auto& f : files) {
    std::ifstream in(f);
    std::stringstream text;
    text << in.rdbuf();
    auto a = cli::run_job(text.str(), 2);
    auto b = cli::run_job(text.str(), 2);
    r.check(a.report == b.report && a.exit_code == b.exit_code, f.filename().string() + ": reports differ");
    r.check(a.exit_code == 0, f.filename().string() + ": exits " + std::to_string(a.exit_code));
  }
  return r;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Result()>>> criteria{
      {"group-law axiom suite", criterion_1},
      {"p-series closed form", criterion_2},
      {"evP equals p-fold composition", criterion_3},
      {"witt2 p-fold compositions", criterion_4},
      {"structure constants and reconstruction", criterion_5},
      {"constants tower", criterion_6},
      {"canonical basis round trip", criterion_7},
      {"product assembly", criterion_8},
      {"wronskian dependence", criterion_9},
      {"truncation commutes with canonical", criterion_10},
      {"CLI determinism", criterion_11},
  };
  bool all = true;
  for (std::size_t n = 0; n < criteria.size(); ++n) {
    auto start = std::chrono::steady_clock::now();
    Result r;
    try {
      r = criteria[n].second();
    } catch (const std::exception& e) {
      r.pass = false;
      r.detail = std::string("uncaught: ") + e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s criterion %zu: %s (%zu checks, %.2f s)%s%s\n", r.pass ? "PASS" : "FAIL", n + 1,
                criteria[n].first.c_str(), r.cases, secs, r.pass ? "" : ": ", r.detail.c_str());
    std::fflush(stdout);
    all = all && r.pass;
  }
  return all ? 0 : 1;
}
