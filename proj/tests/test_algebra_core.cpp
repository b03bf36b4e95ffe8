#include <gtest/gtest.h>

#include "support.hpp"

using namespace hsd;
using namespace hsd::test;

TEST(Scalars, BinomModPMatchesIntegerBinomial) {
  for (std::uint32_t p : {2u, 3u, 5u, 7u})
    for (std::uint64_t n = 0; n <= 64; ++n)
      for (std::uint64_t k = 0; k <= n; ++k) ASSERT_EQ(binom_mod_p(n, k, p), binomial(n, k) % p) << n << " " << k;
}

TEST(Scalars, BinomExamples) {
  EXPECT_EQ(binom_mod_p(1, 1, 2), 1u);
  EXPECT_EQ(binom_mod_p(2, 1, 2), 0u);
  EXPECT_EQ(binom_mod_p(4, 2, 2), 0u);
  EXPECT_EQ(binom_mod_p(3, 1, 3), 0u);
  EXPECT_EQ(binom_mod_p(4, 2, 3), 0u);
}

TEST(Scalars, LambdaCoefficients) {
  EXPECT_EQ(lambda_coeffs(2), (std::vector<std::uint32_t>{1}));
  EXPECT_EQ(lambda_coeffs(3), (std::vector<std::uint32_t>{1, 1}));
  EXPECT_EQ(lambda_coeffs(5), (std::vector<std::uint32_t>{1, 2, 2, 1}));
  for (std::uint32_t p : {2u, 3u, 5u, 7u}) {
    auto l = lambda_coeffs(p);
    for (std::uint32_t i = 1; i < p; ++i) EXPECT_EQ(l[i - 1], lambda(p, i));
  }
}

TEST(Scalars, LambdaSumIsTheCarryPolynomial) {
  // sum lambda_i x^i y^(p-i) == ((x+y)^p - x^p - y^p)/p, coefficients from integer binomials
  for (std::uint32_t p : {2u, 3u, 5u, 7u}) {
    const Field& k = Field::get(p);
    VarList xy = make_vars({"x", "y"});
    MultiPoly lhs(k, xy), rhs(k, xy);
    auto l = lambda_coeffs(p);
    for (std::uint32_t i = 1; i < p; ++i) {
      lhs.add_term({i, p - i}, k.from_int(l[i - 1]));
      rhs.add_term({i, p - i}, k.from_int(static_cast<long long>(binomial(p, i) / p)));
    }
    EXPECT_EQ(lhs, rhs);
  }
}

TEST(Field, PrimeFieldMatchesIntegers) {
  const Field& k = Field::get(7);
  for (int a = 0; a < 7; ++a)
    for (int b = 0; b < 7; ++b) {
      EXPECT_EQ((k.from_int(a) * k.from_int(b)).code(), static_cast<std::uint32_t>(a * b % 7));
      EXPECT_EQ((k.from_int(a) + k.from_int(b)).code(), static_cast<std::uint32_t>((a + b) % 7));
      EXPECT_EQ((k.from_int(a) - k.from_int(b)).code(), static_cast<std::uint32_t>((a - b + 7) % 7));
    }
  EXPECT_EQ(k.from_int(-1).code(), 6u);
}

TEST(Field, ExtensionFieldAxioms) {
  for (auto [p, d] : {std::pair{2u, 2u}, {2u, 3u}, {3u, 2u}, {5u, 2u}}) {
    const Field& k = Field::get(p, d);
    ASSERT_EQ(k.q(), ipow(p, d));
    for (std::uint32_t a = 1; a < k.q(); ++a) {
      Fq x = k.element(a);
      EXPECT_EQ(x * x.inverse(), k.one());
      EXPECT_EQ(x.pow(k.q() - 1), k.one());
      EXPECT_EQ(x.frobenius_inverse().pow(p), x);
      EXPECT_EQ(x.pow(ipow(p, d - 1)).pow(p), x);
    }
    std::mt19937_64 g(p * 10 + d);
    for (int t = 0; t < 200; ++t) {
      Fq a = random_element(g, k), b = random_element(g, k), c = random_element(g, k);
      EXPECT_EQ(a * (b + c), a * b + a * c);
      EXPECT_EQ((a + b).pow(p), a.pow(p) + b.pow(p));
    }
  }
}

TEST(Field, Errors) {
  EXPECT_EQ(error_kind([] { Field::get(4); }), ErrorKind::NotPrime);
  EXPECT_EQ(error_kind([] { Field::get(2, 2, {1, 0, 1}); }), ErrorKind::ReducibleModulus);
  EXPECT_EQ(error_kind([] { Field::get(2, 2, {1, 1, 1}); }), std::nullopt);
  EXPECT_EQ(error_kind([] { Field::get(7).zero().inverse(); }), ErrorKind::DivisionByZero);
}

TEST(Field, InternedInstances) { EXPECT_EQ(&Field::get(3, 2), &Field::get(3, 2)); }

TEST(MultiPoly, RingAxiomsOnRandomElements) {
  const Field& k = Field::get(3, 2);
  VarList vars = make_vars({"x", "y"});
  std::mt19937_64 g(5);
  std::uniform_int_distribution<std::uint32_t> ex(0, 3);
  auto rnd = [&] {
    MultiPoly f(k, vars);
    for (int t = 0; t < 4; ++t) f.add_term({ex(g), ex(g)}, random_element(g, k));
    return f;
  };
  for (int t = 0; t < 50; ++t) {
    MultiPoly a = rnd(), b = rnd(), c = rnd();
    EXPECT_EQ(a * b, b * a);
    EXPECT_EQ(a * (b + c), a * b + a * c);
    EXPECT_EQ((a * b) * c, a * (b * c));
    EXPECT_EQ(a - a, MultiPoly(k, vars));
    EXPECT_EQ(a.pow(3), a * a * a);
    if (!b.is_zero()) {
      auto q = (a * b).divide_exact(b);
      ASSERT_TRUE(q.has_value());
      EXPECT_EQ(*q, a);
    }
  }
}

TEST(MultiPoly, FreshmansDream) {
  const Field& k = Field::get(5);
  VarList vars = make_vars({"x", "y"});
  MultiPoly x = MultiPoly::variable(k, vars, 0), y = MultiPoly::variable(k, vars, 1);
  EXPECT_EQ((x + y).pow(5), x.pow(5) + y.pow(5));
  EXPECT_NE((x + y).pow(4), x.pow(4) + y.pow(4));
}

TEST(Text, PrintingExamples) {
  const Field& k = Field::get(2);
  VarList vw = make_vars({"v1", "w1"});
  EXPECT_EQ(to_string(MultiPoly(k, vw)), "0");
  MultiPoly v = MultiPoly::variable(k, vw, 0), w = MultiPoly::variable(k, vw, 1);
  EXPECT_EQ(to_string(v + w + v * w), "v1 + w1 + v1*w1");
  EXPECT_EQ(to_string(FormalGroupLaw::multiplicative(k, 1)->components()[0]), "v1 + w1 + v1*w1");
}

TEST(Text, RoundTripRandomPolynomials) {
  for (auto [p, d] : {std::pair{2u, 1u}, {3u, 1u}, {2u, 3u}, {3u, 2u}}) {
    const Field& k = Field::get(p, d);
    VarList vars = make_vars({"x1", "x2", "v"});
    std::mt19937_64 g(p + d);
    std::uniform_int_distribution<std::uint32_t> ex(0, 6);
    for (int t = 0; t < 60; ++t) {
      MultiPoly f(k, vars);
      for (int s = 0; s < 6; ++s) f.add_term({ex(g), ex(g), ex(g)}, random_element(g, k));
      ASSERT_EQ(parse_multipoly(to_string(f), k, vars), f) << to_string(f);
    }
  }
}

TEST(Text, ParsingSyntax) {
  const Field& k = Field::get(3);
  VarList vars = make_vars({"x", "y"});
  MultiPoly x = MultiPoly::variable(k, vars, 0), y = MultiPoly::variable(k, vars, 1);
  EXPECT_EQ(parse_multipoly("3*x^2*y - y + 4", k, vars), y * k.from_int(2) + MultiPoly::constant(k, vars, k.one()));
  EXPECT_EQ(parse_multipoly("(x + y)^3", k, vars), x.pow(3) + y.pow(3));
  EXPECT_EQ(parse_multipoly("-(x - 1)*(x + 1)", k, vars), MultiPoly::constant(k, vars, k.one()) - x * x);
  const Field& k4 = Field::get(2, 2);
  VarList one = make_vars({"x"});
  MultiPoly gx = parse_multipoly("g^2*x + g", k4, one);
  EXPECT_EQ(gx.constant_term(), k4.generator());
  EXPECT_EQ(gx.coefficient({1}), k4.generator() * k4.generator());
}

TEST(Text, ParseErrors) {
  const Field& k = Field::get(3);
  VarList vars = make_vars({"x"});
  EXPECT_EQ(error_kind([&] { parse_multipoly("x +", k, vars); }), ErrorKind::ParseError);
  EXPECT_EQ(error_kind([&] { parse_multipoly("x^", k, vars); }), ErrorKind::ParseError);
  EXPECT_EQ(error_kind([&] { parse_multipoly("(x", k, vars); }), ErrorKind::ParseError);
  EXPECT_EQ(error_kind([&] { parse_multipoly("z", k, vars); }), ErrorKind::UnknownVariable);
  EXPECT_EQ(error_kind([&] { parse_multipoly("x/2", k, vars); }), ErrorKind::ParseError);
}

TEST(RationalFunc, Examples) {
  const Field& k = Field::get(3);
  VarList vars = make_vars({"x"});
  RationalFunc x = parse_ratfunc("x", k, vars);
  RationalFunc one = RationalFunc::one(k, vars);
  EXPECT_EQ(x * (one / x), one);
  RationalFunc xp1 = parse_ratfunc("x + 1", k, vars);
  EXPECT_TRUE((xp1 + xp1 * k.from_int(2)).is_zero());
  EXPECT_EQ(x / x, one);
  EXPECT_EQ(parse_ratfunc("(x^2 - 1)/(x - 1)", k, vars), xp1);
  EXPECT_TRUE(parse_ratfunc("(x^2 - 1)/(x - 1)", k, vars).is_polynomial());
  EXPECT_EQ(error_kind([&] { parse_ratfunc("1/(x - x)", k, vars); }), ErrorKind::DivisionByZero);
}

TEST(RationalFunc, FieldAxiomsOnRandomElements) {
  const Field& k = Field::get(2, 2);
  VarList vars = make_vars({"x", "y"});
  std::mt19937_64 g(17);
  std::uniform_int_distribution<std::uint32_t> ex(0, 2);
  auto rnd = [&] {
    MultiPoly n(k, vars), d(k, vars);
    for (int t = 0; t < 3; ++t) {
      n.add_term({ex(g), ex(g)}, random_element(g, k));
      d.add_term({ex(g), ex(g)}, random_element(g, k));
    }
    d.add_term({3, 0}, k.one());
    return RationalFunc(n, d);
  };
  for (int t = 0; t < 30; ++t) {
    RationalFunc a = rnd(), b = rnd(), c = rnd();
    EXPECT_EQ(a * (b + c), a * b + a * c);
    EXPECT_EQ((a + b) - b, a);
    if (!b.is_zero()) EXPECT_EQ((a / b) * b, a);
    EXPECT_EQ(parse_ratfunc(to_string(a), k, vars), a);
  }
}
