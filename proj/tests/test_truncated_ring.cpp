#include <gtest/gtest.h>

#include "support.hpp"

using namespace hsd;
using namespace hsd::test;

namespace {

Poly var(const LayoutPtr& l, const std::string& name, const Field& k = Field::get(2)) {
  return Poly::variable(l, *l->find_var(name), k.one());
}

// drops every monomial with an exponent at or beyond its bound
MultiPoly truncate_reference(const MultiPoly& f, const RingLayout& l) {
  MultiPoly out(f.field(), f.vars());
  for (const auto& [e, c] : f.terms())
    if (l.in_range(e)) out.add_term(e, c);
  return out;
}

}  // namespace

TEST(Layout, BlockNames) {
  LayoutPtr l = RingLayout::make({{"x", 2, 4}, {"v2", 1, 4}});
  EXPECT_EQ(l->var_names(), (std::vector<std::string>{"x1", "x2", "v2_1"}));
  EXPECT_EQ(l->find_var("x2"), 1u);
  EXPECT_FALSE(l->find_var("x3").has_value());
}

TEST(TruncPoly, MultiplicationMatchesUntruncatedProduct) {
  for (auto [p, d] : {std::pair{2u, 1u}, {3u, 1u}, {2u, 2u}}) {
    const Field& k = Field::get(p, d);
    LayoutPtr l = RingLayout::make({{"v", 2, p * p}, {"w", 1, p}});
    VarList names = make_vars(l->var_names());
    std::mt19937_64 g(p * 3 + d);
    std::uniform_int_distribution<std::uint32_t> ex(0, p * p - 1);
    for (int t = 0; t < 80; ++t) {
      MultiPoly a(k, names), b(k, names);
      for (int s = 0; s < 5; ++s) {
        a.add_term({ex(g), ex(g), ex(g) % p}, random_element(g, k));
        b.add_term({ex(g), ex(g), ex(g) % p}, random_element(g, k));
      }
      Poly ta = to_trunc(a, l), tb = to_trunc(b, l);
      EXPECT_EQ(to_multipoly(ta * tb), truncate_reference(a * b, *l));
      EXPECT_EQ(to_multipoly(ta + tb), truncate_reference(a + b, *l));
      EXPECT_EQ(ta.pow(p + 1), ta * ta.pow(p));
    }
  }
}

TEST(TruncPoly, SubstituteExamples) {
  const Field& k = Field::get(2);
  LayoutPtr vw = RingLayout::make({{"v", 1, 4}, {"w", 1, 4}});
  Poly v = var(vw, "v1"), w = var(vw, "w1");
  EXPECT_EQ(substitute(v * v, {{"v1", v + w}}, vw), v * v + w * w);
  EXPECT_EQ(substitute(v * v + w, {{"v1", v}, {"w1", w}}, vw), v * v + w);
  LayoutPtr two = RingLayout::make({{"v", 2, 4}});
  Poly v1 = var(two, "v1"), v2 = var(two, "v2");
  EXPECT_TRUE(substitute(v1 * v1, {{"v1", v2.pow(3)}}, two).is_zero());
  EXPECT_EQ(error_kind([&] { substitute(v, {{"v1", v + constant_poly(vw, k.one())}}, vw); }),
            ErrorKind::NonNilpotentImage);
  EXPECT_EQ(error_kind([&] { substitute(v, {{"q1", v}}, vw); }), ErrorKind::UnknownVariable);
}

TEST(TruncPoly, SubstitutionIsARingHomomorphism) {
  const Field& k = Field::get(3);
  LayoutPtr src = RingLayout::make({{"x", 2, 9}});
  LayoutPtr dst = RingLayout::make({{"y", 2, 9}});
  std::mt19937_64 g(3);
  std::uniform_int_distribution<std::uint32_t> ex(0, 8);
  auto rnd = [&](const LayoutPtr& l, bool nilpotent) {
    Poly f = zero_poly(l, k);
    for (int s = 0; s < 4; ++s) {
      Exponents e{ex(g), ex(g)};
      if (nilpotent && e[0] + e[1] == 0) e[0] = 1;
      f.add_term(e, random_element(g, k));
    }
    return f;
  };
  for (int t = 0; t < 30; ++t) {
    std::map<std::string, Poly> img{{"x1", rnd(dst, true)}, {"x2", rnd(dst, true)}};
    Poly a = rnd(src, false), b = rnd(src, false);
    EXPECT_EQ(substitute(a * b, img, dst), substitute(a, img, dst) * substitute(b, img, dst));
    EXPECT_EQ(substitute(a + b, img, dst), substitute(a, img, dst) + substitute(b, img, dst));
  }
}

TEST(TruncPoly, InvertUnitExamples) {
  for (std::uint32_t p : {2u, 3u}) {
    const Field& k = Field::get(p);
    LayoutPtr l = RingLayout::make({{"v", 1, p}});
    Poly one = constant_poly(l, k.one());
    Poly v = Poly::variable(l, 0, k.one());
    EXPECT_EQ(one.invert_unit(), one);
    Poly inv = (one + v).invert_unit();
    EXPECT_EQ(inv * (one + v), one);
    if (p == 2) EXPECT_EQ(inv, one + v);
    if (p == 3) EXPECT_EQ(inv, one + v * k.from_int(2) + v * v);
    EXPECT_EQ(error_kind([&] { v.invert_unit(); }), ErrorKind::NotAUnit);
  }
}

TEST(TruncPoly, InverseOfRandomUnits) {
  const Field& k = Field::get(2, 2);
  LayoutPtr l = RingLayout::make({{"v", 2, 4}});
  std::mt19937_64 g(9);
  std::uniform_int_distribution<std::uint32_t> ex(0, 3);
  for (int t = 0; t < 30; ++t) {
    Poly f = constant_poly(l, k.element(1 + t % 3));
    for (int s = 0; s < 4; ++s) {
      Exponents e{ex(g), ex(g)};
      if (e[0] + e[1] == 0) continue;
      f.add_term(e, random_element(g, k));
    }
    EXPECT_EQ(f * f.invert_unit(), constant_poly(l, k.one()));
  }
}

TEST(TruncPoly, FrobeniusRootExamples) {
  for (std::uint32_t p : {2u, 3u}) {
    const Field& k = Field::get(p);
    LayoutPtr l = RingLayout::make({{"v", 1, p * p * p}});
    Poly v = Poly::variable(l, 0, k.one());
    EXPECT_EQ(frobenius_root(v.pow(p)), v);
    EXPECT_EQ(frobenius_root(v.pow(2 * p) + v.pow(p)), v * v + v);
    EXPECT_EQ(error_kind([&] { frobenius_root(v.pow(p + 1)); }), ErrorKind::FractionalExponent);
  }
}

TEST(TruncPoly, FrobeniusRootInvertsPthPowers) {
  const Field& k = Field::get(3, 2);
  LayoutPtr l = RingLayout::make({{"v", 2, 27}});
  std::mt19937_64 g(21);
  std::uniform_int_distribution<std::uint32_t> ex(0, 8);
  for (int t = 0; t < 20; ++t) {
    Poly f = zero_poly(l, k);
    for (int s = 0; s < 3; ++s) f.add_term({ex(g), ex(g)}, random_element(g, k));
    EXPECT_EQ(frobenius_root(f.pow(3)), f);
  }
}

TEST(TruncPoly, RemapByNameDropsOverflow) {
  const Field& k = Field::get(2);
  LayoutPtr big = RingLayout::make({{"x", 1, 8}});
  LayoutPtr small = RingLayout::make({{"x", 1, 4}});
  Poly x = Poly::variable(big, 0, k.one());
  EXPECT_EQ(remap_by_name(x.pow(5) + x.pow(3), small), Poly::variable(small, 0, k.one()).pow(3));
}
