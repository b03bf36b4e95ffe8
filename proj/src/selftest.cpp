#include <atomic>
#include <functional>
#include <random>
#include <thread>

#include "hsd/canonical_basis.hpp"
#include "hsd/cli.hpp"
#include "hsd/poly_text.hpp"
#include "hsd/wronskian_field.hpp"

namespace hsd::cli {

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;
  void fail(const std::string& what) {
    if (pass) detail = what;
    pass = false;
  }
};

using Check = std::function<Verdict()>;

// x_j plus up to three random monomials of degree >= 2.
std::string random_automorphism(std::mt19937_64& g, unsigned p, unsigned e, std::uint32_t bound, unsigned j) {
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

Verdict field_inverses() {
  Verdict v;
  for (auto [p, d] : {std::pair{2u, 3u}, {3u, 2u}, {5u, 1u}, {2u, 1u}}) {
    const Field& k = Field::get(p, d);
    for (std::uint32_t c = 1; c < k.q(); ++c) {
      Fq a = k.element(c);
      if (a * a.inverse() != k.one()) v.fail("inverse fails in F_" + std::to_string(k.q()));
    }
  }
  return v;
}

Verdict poly_round_trip() {
  Verdict v;
  const Field& k = Field::get(3, 2);
  std::mt19937_64 g(11);
  std::uniform_int_distribution<std::uint32_t> code(0, k.q() - 1), ex(0, 4);
  VarList vars = make_vars({"x", "y", "z"});
  for (int t = 0; t < 40; ++t) {
    MultiPoly f(k, vars);
    for (int s = 0; s < 5; ++s) {
      MultiPoly mono = MultiPoly::constant(k, vars, k.element(code(g)));
      for (std::size_t i = 0; i < 3; ++i) mono = mono * MultiPoly::variable(k, vars, i).pow(ex(g));
      f = f + mono;
    }
    if (parse_multipoly(to_string(f), k, vars) != f) v.fail("round trip fails for " + to_string(f));
  }
  return v;
}

Verdict law_axioms() {
  Verdict v;
  const Field& k3 = Field::get(3);
  const Field& k4 = Field::get(2, 2);
  std::vector<LawPtr> laws{FormalGroupLaw::additive(k3, 2, 2), FormalGroupLaw::multiplicative(k3, 2),
                           FormalGroupLaw::witt2(k3, 2, {k3.one(), k3.from_int(2)}),
                           FormalGroupLaw::witt2(k4, 2, {k4.generator(), k4.one()})};
  for (const auto& law : laws) {
    LawAxiomsReport r = check_axioms(*law);
    if (!(r.unit_left && r.unit_right && r.associative && r.commutative)) v.fail(to_string(law->kind()) + " law fails its axioms");
  }
  return v;
}

Verdict pseries_closed_form() {
  Verdict v;
  for (unsigned p : {2u, 3u}) {
    const Field& k = Field::get(p);
    std::vector<Fq> alphas{k.one(), k.from_int(p - 1)};
    auto law = FormalGroupLaw::witt2(k, 2, alphas);
    auto s = n_series(*law, p);
    Poly v2 = variable_poly(law->v_layout(), k, 1);
    Poly expect = zero_poly(law->v_layout(), k) - v2.pow(p) * alphas[0] - v2.pow(p * p) * alphas[1];
    if (s[0] != expect || !s[1].is_zero()) v.fail("[p]_F differs at p = " + std::to_string(p));
  }
  return v;
}

Verdict evp() {
  Verdict v;
  const Field& k = Field::get(2);
  for (const auto& law : {FormalGroupLaw::witt2(k, 2, {k.one(), k.one()}), FormalGroupLaw::multiplicative(Field::get(3), 2)}) {
    auto d = HSDerivation::canonical(law);
    auto ev = p_fold_evP(d);
    for (std::size_t i = 0; i < ev.size(); ++i)
      if (ev[i] != d.component(i).pow(law->p())) v.fail("D^(p) mismatch at " + index_text(d.indices()[i]));
  }
  return v;
}

Verdict iterativity() {
  Verdict v;
  const Field& k = Field::get(3);
  auto law = FormalGroupLaw::witt2(k, 2, {k.one(), k.from_int(2)});
  auto d = HSDerivation::canonical(law);
  if (!check_iterativity(d, *law, IterativityScope::AllBasis).pass) v.fail("canonical derivation not iterative");
  auto t = twist_by_automorphism(d, std::vector<std::string>{"x1 + x2^2", "x2 + 2*x1^3"});
  if (!check_iterativity(t, *law, IterativityScope::AllBasis).pass) v.fail("twisted derivation not iterative");
  return v;
}

Verdict reconstruction() {
  Verdict v;
  const Field& k = Field::get(2);
  for (const auto& law : {FormalGroupLaw::witt2(k, 2, {k.one(), k.one()}), FormalGroupLaw::additive(k, 2, 2)}) {
    auto d = HSDerivation::canonical(law);
    try {
      auto r = reconstruct_from_ppowers(d);
      if (r.components() != d.components()) v.fail("reconstruction differs");
    } catch (const Error& e) {
      v.fail(e.what());
    }
  }
  return v;
}

Verdict tower_ratios() {
  Verdict v;
  const Field& k = Field::get(2);
  auto law = FormalGroupLaw::witt2(k, 3, {k.one()});
  ConstantsTower t = tower(HSDerivation::canonical(law));
  for (const auto& r : t.ratios)
    if (!r || *r != 4) v.fail("ratio is not p^e");
  if (t.degenerate) v.fail("tower reported degenerate");
  for (bool b : t.multiplicatively_closed)
    if (!b) v.fail("constants not closed under products");
  return v;
}

Verdict basis_round_trip() {
  Verdict v;
  std::mt19937_64 g(2024);
  for (unsigned p : {2u, 3u}) {
    const Field& k = Field::get(p);
    std::uniform_int_distribution<unsigned> c(0, p - 1);
    for (int trial = 0; trial < 6; ++trial) {
      std::vector<Fq> alphas{k.from_int(c(g)), k.from_int(c(g))};
      auto law = FormalGroupLaw::witt2(k, 2, alphas);
      auto d = HSDerivation::canonical(law);
      std::uint32_t b = d.model()->bound();
      std::vector<std::string> phi{random_automorphism(g, p, 2, b, 0), random_automorphism(g, p, 2, b, 1)};
      try {
        auto t = twist_by_automorphism(d, phi);
        auto z = find_canonical_basis(t);
        if (!verify_canonical_basis(t, *law, z).pass) v.fail("basis fails verification for phi = " + phi[0] + ", " + phi[1]);
      } catch (const Error& e) {
        v.fail(std::string(e.what()) + " for phi = " + phi[0] + ", " + phi[1]);
      }
    }
  }
  return v;
}

Verdict product_basis() {
  Verdict v;
  const Field& k = Field::get(2);
  auto law = FormalGroupLaw::product({FormalGroupLaw::additive(k, 1, 2), FormalGroupLaw::multiplicative(k, 2)});
  auto d = HSDerivation::canonical(law);
  try {
    auto t = twist_by_automorphism(d, std::vector<std::string>{"x1 + x2^2", "x2 + x1^2*x2"});
    auto z = find_canonical_basis(t);
    if (!verify_canonical_basis(t, *law, z).pass) v.fail("product basis fails verification");
  } catch (const Error& e) {
    v.fail(e.what());
  }
  return v;
}

Verdict wronskian_examples() {
  Verdict v;
  const Field& k = Field::get(3);
  FieldDerivationContext ctx(FormalGroupLaw::additive(k, 1, 1));
  auto dep = [&](std::vector<std::string> xs) {
    std::vector<RationalFunc> fs;
    for (const auto& s : xs) fs.push_back(ctx.parse(s));
    return dependence_test(ctx, fs).dependent;
  };
  if (dep({"1", "x", "x^2"})) v.fail("{1, x, x^2} reported dependent");
  if (!dep({"1", "x^3"})) v.fail("{1, x^3} reported independent");
  if (!dep({"x/(x+1)", "x^4/(x+1)"})) v.fail("{f, x^3 f} reported independent");
  std::vector<RationalFunc> zs{ctx.parse("x")};
  if (!p_independence_test(zs)) v.fail("x is not p-independent");
  zs = {ctx.parse("x^3")};
  if (p_independence_test(zs)) v.fail("x^3 reported p-independent");
  return v;
}

Verdict truncation_commutes() {
  Verdict v;
  const Field& k = Field::get(2);
  auto law = FormalGroupLaw::witt2(k, 3, {k.one(), k.one(), k.one()});
  auto d = HSDerivation::canonical(law);
  for (unsigned mp = 1; mp < 3; ++mp) {
    auto a = truncate_derivation(d, mp);
    auto b = HSDerivation::canonical(truncate_law(law, mp));
    if (a.components() != b.components()) v.fail("truncation to m' = " + std::to_string(mp) + " does not commute");
  }
  return v;
}

}  // namespace

std::vector<SelftestCheck> run_selftest(unsigned threads) {
  const std::vector<std::pair<std::string, Check>> checks{
      {"field-inverses", field_inverses},
      {"poly-round-trip", poly_round_trip},
      {"law-axioms", law_axioms},
      {"pseries-closed-form", pseries_closed_form},
      {"evp-vs-composition", evp},
      {"iterativity", iterativity},
      {"reconstruction", reconstruction},
      {"tower-ratios", tower_ratios},
      {"basis-round-trip", basis_round_trip},
      {"product-basis", product_basis},
      {"wronskian-examples", wronskian_examples},
      {"truncation-commutes", truncation_commutes},
  };
  std::vector<SelftestCheck> out(checks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < checks.size(); i = next++) {
      Verdict r;
      try {
        r = checks[i].second();
      } catch (const std::exception& e) {
        r.fail(e.what());
      }
      out[i] = {checks[i].first, r.pass, r.detail};
    }
  };
  unsigned n = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(checks.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return out;
}

}  // namespace hsd::cli
