#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "rightangle/error.hpp"
#include "rightangle/geometry.hpp"
#include "test_util.hpp"

namespace rightangle::geometry {
namespace {

using testutil::make_point;

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorKind::Usage;
}

TEST(IsRightAngle, Examples) {
  const auto f3 = gf::standard_field(3);
  EXPECT_FALSE(is_right_angle(f3, make_point({0, 0}), make_point({0, 0}), make_point({0, 1})));
  EXPECT_TRUE(is_right_angle(f3, make_point({0, 0}), make_point({1, 0}), make_point({0, 1})));

  const auto x = make_point({1, 1, 0, 0, 0});
  const auto y = make_point({0, 0, 1, 1, 0});
  const auto z = make_point({0, 0, 0, 1, 1});
  // Oracle: <z-x, y-x> = 1+1+0+1+0 = 3 = 0 mod 3.
  const auto o = testutil::oracle_field(f3);
  ASSERT_TRUE(oracle::right_angle(o, testutil::to_vec(x), testutil::to_vec(y), testutil::to_vec(z)));
  EXPECT_TRUE(is_right_angle(f3, x, y, z));

  EXPECT_EQ(kind_of([&] { is_right_angle(f3, make_point({0}), make_point({1, 0}), make_point({0, 1})); }),
            ErrorKind::DimensionMismatch);
}

TEST(IsRightAngle, AgreesWithOracle) {
  std::mt19937_64 rng(3);
  for (std::uint32_t q : {3u, 5u, 9u, 25u}) {
    const auto f = gf::standard_field(q);
    const auto o = testutil::oracle_field(f);
    for (int t = 0; t < 2000; ++t) {
      const std::size_t n = 1 + t % 3;
      auto x = testutil::random_point(f, n, rng);
      auto y = testutil::random_point(f, n, rng);
      auto z = testutil::random_point(f, n, rng);
      if (t % 7 == 0) y = x;
      ASSERT_EQ(is_right_angle(f, x, y, z),
                oracle::right_angle(o, testutil::to_vec(x), testutil::to_vec(y), testutil::to_vec(z)));
    }
  }
}

TEST(PointSetTest, Validation) {
  const auto f = gf::standard_field(3);
  EXPECT_EQ(kind_of([&] { PointSet(f, 2, {make_point({0, 1}), make_point({0, 1})}); }), ErrorKind::DuplicatePoint);
  EXPECT_EQ(kind_of([&] { PointSet(f, 2, {make_point({0, 1}), make_point({0})}); }), ErrorKind::DimensionMismatch);
  EXPECT_EQ(kind_of([&] { PointSet(f, 1, {make_point({3})}); }), ErrorKind::OutOfRange);
  EXPECT_NO_THROW(PointSet(f, 2, {}));
}

TEST(FindRightAngle, Examples) {
  const auto f = gf::standard_field(3);
  EXPECT_FALSE(find_right_angle(PointSet(f, 1, {make_point({0}), make_point({1}), make_point({2})})));

  const PointSet corner(f, 2, {make_point({0, 0}), make_point({1, 0}), make_point({0, 1})});
  const auto w = find_right_angle(corner);
  ASSERT_TRUE(w);
  EXPECT_EQ(w->vertex, 0u);
  EXPECT_EQ(w->arm1, 1u);
  EXPECT_EQ(w->arm2, 2u);
  EXPECT_TRUE(w->value.is_zero());
}

TEST(FindRightAngle, ConstructionLayerInF3To5) {
  const auto f = gf::standard_field(3);
  const auto layer = construction_layer(f, 5);
  const auto o = testutil::oracle_field(f);
  const bool oracle_found = oracle::has_right_angle(o, testutil::to_vecs(layer));
  const auto w = find_right_angle(layer);
  EXPECT_EQ(w.has_value(), oracle_found);
  ASSERT_TRUE(w);
  EXPECT_TRUE(is_right_angle(f, layer[w->vertex], layer[w->arm1], layer[w->arm2]));
}

// The reported witness is the first in (vertex, arm1, arm2) order, and
// absence agrees with full ordered enumeration.
TEST(FindRightAngle, FirstWitnessAndOracleAgreement) {
  std::mt19937_64 rng(5);
  for (std::uint32_t q : {3u, 5u, 9u}) {
    const auto f = gf::standard_field(q);
    const auto o = testutil::oracle_field(f);
    for (int t = 0; t < 150; ++t) {
      const std::size_t n = 1 + t % 3;
      const auto a = testutil::random_point_set(f, n, 2 + rng() % 10, rng);
      const auto w = find_right_angle(a);
      ASSERT_EQ(w.has_value(), oracle::has_right_angle(o, testutil::to_vecs(a)));
      if (!w) continue;
      std::optional<TripleWitness> first;
      for (std::size_t v = 0; v < a.size() && !first; ++v) {
        for (std::size_t j = 0; j < a.size() && !first; ++j) {
          for (std::size_t k = j + 1; k < a.size() && !first; ++k) {
            if (is_right_angle(f, a[v], a[j], a[k])) first = TripleWitness{v, j, k, f.zero()};
          }
        }
      }
      ASSERT_TRUE(first);
      EXPECT_EQ(*w, *first);
    }
  }
}

TEST(FindRightAngle, ThreadCountDoesNotChangeAnswer) {
  std::mt19937_64 rng(9);
  const auto f = gf::standard_field(5);
  for (int t = 0; t < 10; ++t) {
    const auto a = testutil::random_point_set(f, 3, 70 + t, rng);
    const auto w1 = find_right_angle(a, 1);
    for (unsigned threads : {2u, 3u, 8u}) EXPECT_EQ(find_right_angle(a, threads), w1);
  }
  // A large free set exercises the no-witness path across workers.
  const auto line = testutil::random_point_set(gf::standard_field(13), 1, 13, rng);
  EXPECT_FALSE(find_right_angle(line, 4));
}

TEST(FullLine, IsFreeForEverySupportedField) {
  for (std::uint32_t q : {2u, 3u, 4u, 5u, 7u, 8u, 9u, 11u, 13u, 25u, 27u, 49u}) {
    const auto f = gf::standard_field(q);
    std::vector<gf::Point> pts;
    for (std::uint32_t c = 0; c < q; ++c) pts.push_back(gf::Point{{gf::FieldElement(c)}});
    EXPECT_FALSE(find_right_angle(PointSet(f, 1, pts))) << q;
  }
}

TEST(ConstructionLayer, Examples) {
  const auto f = gf::standard_field(3);
  const auto two = construction_layer(f, 2);
  ASSERT_EQ(two.size(), 1u);
  EXPECT_EQ(two[0], make_point({1, 1}));
  EXPECT_EQ(construction_layer(f, 4).size(), 6u);
  EXPECT_EQ(construction_layer(f, 5).size(), 10u);
  EXPECT_EQ(kind_of([&] { construction_layer(f, 1); }), ErrorKind::BadDimension);
}

TEST(ConstructionLayer, WeightsOrderAndCount) {
  for (std::uint32_t q : {2u, 3u, 4u, 5u}) {
    const auto f = gf::standard_field(q);
    for (std::size_t n = q - 1; n <= q + 3; ++n) {
      const auto layer = construction_layer(f, n);
      EXPECT_EQ(BigInt(layer.size()), binomial(n, q - 1));
      for (std::size_t i = 0; i < layer.size(); ++i) {
        std::size_t weight = 0;
        for (auto c : layer[i].coords) {
          ASSERT_LE(c.code(), 1u);
          weight += c.code();
        }
        EXPECT_EQ(weight, q - 1);
        if (i > 0) EXPECT_LT(layer[i - 1], layer[i]);
      }
    }
  }
}

TEST(Bounds, UpperBoundValues) {
  EXPECT_EQ(upper_bound(1, 3), 9);
  EXPECT_EQ(upper_bound(2, 3), 13);
  EXPECT_EQ(upper_bound(3, 3), 18);
  EXPECT_EQ(upper_bound(10, 3), 81);
  EXPECT_EQ(upper_bound(4, 5), 129);
  EXPECT_EQ(kind_of([] { upper_bound(3, 4); }), ErrorKind::EvenCharacteristic);
  EXPECT_EQ(kind_of([] { upper_bound(3, 6); }), ErrorKind::NotPrime);
}

TEST(Bounds, LowerBoundValues) {
  EXPECT_EQ(lower_bound_size(4, 3), 6);
  EXPECT_EQ(lower_bound_size(5, 3), 10);
  for (std::uint64_t q : {2u, 3u, 5u, 7u, 9u}) EXPECT_EQ(lower_bound_size(q - 1, q), 1);
  EXPECT_EQ(kind_of([] { lower_bound_size(1, 3); }), ErrorKind::BadDimension);
}

TEST(Bounds, BigBinomialsAreExact) {
  // C(200, 100) has 59 decimal digits.
  EXPECT_EQ(binomial(200, 100).str(), "90548514656103281165404177077484163874504589675413336841320");
  EXPECT_EQ(binomial(5, 7), 0);
}

TEST(Bounds, ReportLowerNeverExceedsUpper) {
  for (std::uint64_t q : {3u, 5u, 7u, 9u}) {
    for (std::uint64_t n = q - 1; n < q + 20; ++n) {
      const auto r = bounds_report(n, q);
      ASSERT_TRUE(r.lower && r.upper);
      EXPECT_LE(*r.lower, *r.upper);
    }
  }
  const auto even = bounds_report(3, 2);
  EXPECT_FALSE(even.upper);
  EXPECT_EQ(*even.lower, 3);
  EXPECT_EQ(*bounds_report(1, 7).exact, 7u);
}

TEST(Translate, Examples) {
  const auto f = gf::standard_field(3);
  const PointSet a(f, 2, {make_point({1, 1})});
  EXPECT_EQ(translate(a, gf::zero_point(2)), a);
  EXPECT_EQ(translate(a, make_point({2, 2}))[0], make_point({0, 0}));
  EXPECT_EQ(kind_of([&] { translate(a, make_point({1})); }), ErrorKind::DimensionMismatch);
}

TEST(Translate, PreservesFreeness) {
  std::mt19937_64 rng(21);
  for (std::uint32_t q : {3u, 5u, 9u}) {
    const auto f = gf::standard_field(q);
    for (int t = 0; t < 100; ++t) {
      const auto a = testutil::random_point_set(f, 2, 3 + t % 6, rng);
      const auto v = testutil::random_point(f, 2, rng);
      EXPECT_EQ(find_right_angle(translate(a, v)).has_value(), find_right_angle(a).has_value());
    }
  }
}

TEST(Invariance, TranslationScalingArmSwap) {
  std::mt19937_64 rng(13);
  for (std::uint32_t q : {3u, 5u, 9u}) {
    const auto f = gf::standard_field(q);
    for (int t = 0; t < 1000; ++t) {
      const std::size_t n = 1 + t % 4;
      const auto x = testutil::random_point(f, n, rng);
      const auto y = testutil::random_point(f, n, rng);
      const auto z = testutil::random_point(f, n, rng);
      const auto v = testutil::random_point(f, n, rng);
      const auto lambda = testutil::random_nonzero(f, rng);
      const bool base = is_right_angle(f, x, y, z);
      EXPECT_EQ(is_right_angle(f, gf::add(f, x, v), gf::add(f, y, v), gf::add(f, z, v)), base);
      EXPECT_EQ(is_right_angle(f, gf::scale(f, lambda, x), gf::scale(f, lambda, y), gf::scale(f, lambda, z)), base);
      EXPECT_EQ(is_right_angle(f, x, z, y), base);
    }
  }
}

}  // namespace
}  // namespace rightangle::geometry
