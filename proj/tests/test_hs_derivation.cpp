#include <gtest/gtest.h>

#include "support.hpp"

using namespace hsd;
using namespace hsd::test;

TEST(Model, BasisAndArithmetic) {
  const Field& k = Field::get(3);
  auto a = ArtinianModel::make(k, 2, 1);
  EXPECT_EQ(a->dim(), 9u);
  EXPECT_EQ(a->one(), a->parse("1"));
  Vector x = a->generator(0), y = a->generator(1);
  EXPECT_EQ(a->multiply(x, y), a->parse("x1*x2"));
  EXPECT_TRUE(a->power(x, 3).is_zero());
  EXPECT_EQ(a->format(a->parse("2*x1^2*x2 + x2 + 1")), "1 + x2 + 2*x1^2*x2");
}

TEST(Canonical, AdditiveComponentsAreDividedPowers) {
  // D_i(x^n) = C(n, i) x^(n-i)
  for (std::uint32_t p : {2u, 3u}) {
    const Field& k = Field::get(p);
    auto d = HSDerivation::canonical(FormalGroupLaw::additive(k, 1, 2));
    const ArtinianModel& a = *d.model();
    const std::uint32_t b = a.bound();
    for (std::uint32_t i = 0; i < b; ++i)
      for (std::uint32_t n = 0; n < b; ++n) {
        Vector expect = a.constant(k.zero());
        if (i <= n) expect = a.power(a.generator(0), n - i) * k.from_int(static_cast<long long>(binomial(n, i) % p));
        EXPECT_EQ(d.component_apply({i}, a.power(a.generator(0), n)), expect);
      }
  }
}

TEST(Canonical, LeibnizRuleOnRandomElements) {
  std::mt19937_64 g(3);
  const Field& k = Field::get(3);
  auto d = HSDerivation::canonical(FormalGroupLaw::witt2(k, 1, {k.one()}));
  const ArtinianModel& a = *d.model();
  auto rnd = [&] {
    Vector v(k, a.dim());
    for (std::size_t i = 0; i < a.dim(); ++i) v.set(i, random_element(g, k));
    return v;
  };
  for (int t = 0; t < 20; ++t) {
    Vector f = rnd(), h = rnd();
    for (const auto& i : d.indices().items()) {
      Vector sum = a.constant(k.zero());
      for (const auto& s : d.indices().items())
        if (s[0] <= i[0] && s[1] <= i[1])
          sum += a.multiply(d.component_apply(s, f), d.component_apply({i[0] - s[0], i[1] - s[1]}, h));
      EXPECT_EQ(d.component_apply(i, a.multiply(f, h)), sum);
    }
  }
}

TEST(Canonical, IdentityAtZeroAndIterative) {
  std::mt19937_64 g(4);
  for (std::uint32_t p : {2u, 3u})
    for (unsigned m : {1u, 2u}) {
      const Field& k = Field::get(p);
      for (const auto& law : {FormalGroupLaw::additive(k, 2, m), FormalGroupLaw::multiplicative(k, m),
                              FormalGroupLaw::witt2(k, m, random_alphas(g, k, m))}) {
        auto d = HSDerivation::canonical(law);
        EXPECT_EQ(d.component(0), Matrix::identity(k, d.model()->dim()));
        EXPECT_TRUE(check_iterativity(d, *law, IterativityScope::AllBasis).pass);
        auto t = twist_by_automorphism(d, random_phi(g, d));
        EXPECT_TRUE(check_iterativity(t, *law, IterativityScope::AllBasis).pass);
        EXPECT_EQ(t.component(0), Matrix::identity(k, d.model()->dim()));
      }
    }
}

TEST(Iterativity, PerturbedAdditiveIsTruncationSensitive) {
  const Field& k3 = Field::get(3);
  auto a3 = ArtinianModel::make(k3, 1, 1);
  auto ga3 = FormalGroupLaw::additive(k3, 1, 1);
  auto d3 = HSDerivation::from_images(a3, std::vector<std::string>{"x1 + v1^2"}, ga3);
  EXPECT_FALSE(check_iterativity(d3, *ga3).pass);
  const Field& k2 = Field::get(2);
  auto a2 = ArtinianModel::make(k2, 1, 1);
  auto ga2 = FormalGroupLaw::additive(k2, 1, 1);
  auto d2 = HSDerivation::from_images(a2, std::vector<std::string>{"x1 + v1^2"}, ga2);
  EXPECT_TRUE(check_iterativity(d2, *ga2).pass);
}

TEST(Derivation, ImageValidation) {
  const Field& k = Field::get(3);
  auto a = ArtinianModel::make(k, 1, 1);
  EXPECT_EQ(error_kind([&] { HSDerivation::from_images(a, std::vector<std::string>{"2*x1 + v1"}); }),
            ErrorKind::InvalidArgument);
  auto d = HSDerivation::canonical(FormalGroupLaw::additive(k, 1, 1));
  EXPECT_EQ(error_kind([&] { d.component(MultiIndex{3}); }), ErrorKind::IndexRange);
}

TEST(Derivation, TrivialHasZeroComponents) {
  const Field& k = Field::get(2);
  auto a = ArtinianModel::make(k, 2, 1);
  auto d = HSDerivation::trivial(a);
  for (std::size_t i = 1; i < d.components().size(); ++i) EXPECT_TRUE(d.component(i).is_zero());
}

TEST(Compose, MatchesMatrixProductAndStructureConstants) {
  const Field& k = Field::get(2);
  auto law = FormalGroupLaw::additive(k, 1, 2);
  auto d = HSDerivation::canonical(law);
  // D_1 D_2 = 3 D_3 = D_3
  EXPECT_EQ(compose(d, {1}, {2}), d.component(MultiIndex{3}));
  EXPECT_EQ(compose(d, {1}, {1}), Matrix(k, 4, 4));
  for (const auto& i : d.indices().items())
    for (const auto& j : d.indices().items()) EXPECT_EQ(compose(d, j, i), d.component(j) * d.component(i));
}

TEST(Reconstruction, Examples) {
  const Field& k = Field::get(2);
  auto d = HSDerivation::canonical(FormalGroupLaw::additive(k, 1, 2));
  EXPECT_EQ(reconstruct_from_ppowers(d).components(), d.components());
  const Field& k3 = Field::get(3);
  auto w = HSDerivation::canonical(FormalGroupLaw::witt2(k3, 1, {k3.one()}));
  EXPECT_EQ(reconstruct_from_ppowers(w).components(), w.components());
}

TEST(Reconstruction, NonIterativeInputIsRejected) {
  const Field& k = Field::get(3);
  auto a = ArtinianModel::make(k, 1, 2);
  auto law = FormalGroupLaw::additive(k, 1, 2);
  auto d = HSDerivation::from_images(a, std::vector<std::string>{"x1 + v1 + v1^2"}, law);
  EXPECT_EQ(error_kind([&] { reconstruct_from_ppowers(d); }), ErrorKind::ReconstructionMismatch);
}

TEST(Truncation, IdentityAndWitt2) {
  const Field& k = Field::get(2);
  auto law = FormalGroupLaw::witt2(k, 2, {k.one(), k.one()});
  auto d = HSDerivation::canonical(law);
  EXPECT_EQ(truncate_derivation(d, 2).components(), d.components());
  auto t = truncate_derivation(d, 1);
  EXPECT_EQ(t.components(), HSDerivation::canonical(FormalGroupLaw::witt2(k, 1, {k.one()})).components());
  EXPECT_EQ(error_kind([&] { truncate_derivation(d, 3); }), ErrorKind::TruncationOrder);
}

TEST(Twist, IdentityAndErrors) {
  const Field& k = Field::get(3);
  auto law = FormalGroupLaw::witt2(k, 1, {k.one()});
  auto d = HSDerivation::canonical(law);
  EXPECT_EQ(twist_by_automorphism(d, std::vector<std::string>{"x1", "x2"}).components(), d.components());
  EXPECT_EQ(error_kind([&] { twist_by_automorphism(d, std::vector<std::string>{"x1 + 1", "x2"}); }),
            ErrorKind::NonNilpotentImage);
  EXPECT_EQ(error_kind([&] { twist_by_automorphism(d, std::vector<std::string>{"x1 + x2", "2*x1 + 2*x2"}); }),
            ErrorKind::NotInvertible);
}

TEST(Twist, ConjugatesComponents) {
  // phi D_i phi^{-1} on the matrix level: D'_i = P D_i P^{-1} where P is the
  // matrix of the automorphism.
  std::mt19937_64 g(8);
  const Field& k = Field::get(2);
  auto law = FormalGroupLaw::witt2(k, 2, {k.one(), k.zero()});
  auto d = HSDerivation::canonical(law);
  auto phi = random_phi(g, d);
  auto t = twist_by_automorphism(d, phi);
  const ArtinianModel& a = *d.model();
  std::vector<Vector> images;
  for (const auto& s : phi) images.push_back(a.parse(s));
  std::vector<Vector> cols;
  for (const auto& mono : a.basis().items()) {
    Vector v = a.one();
    for (unsigned j = 0; j < a.e(); ++j) v = a.multiply(v, a.power(images[j], mono[j]));
    cols.push_back(v);
  }
  Matrix P = Matrix::from_columns(k, a.dim(), cols);
  for (std::size_t i = 0; i < d.components().size(); ++i) EXPECT_EQ(t.component(i) * P, P * d.component(i));
}
