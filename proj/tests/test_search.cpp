#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "oracles.hpp"
#include "rightangle/error.hpp"
#include "rightangle/search.hpp"
#include "rightangle/serialize.hpp"
#include "test_util.hpp"

namespace rightangle::search {
namespace {

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorKind::Usage;
}

void expect_free(const SearchResult& r) {
  EXPECT_EQ(r.best.size(), r.size);
  EXPECT_EQ(r.best.n(), r.n);
  EXPECT_FALSE(geometry::find_right_angle(r.best));
  const auto o = testutil::oracle_field(r.best.field());
  EXPECT_FALSE(oracle::has_right_angle(o, testutil::to_vecs(r.best)));
}

TEST(SearchBudgetTest, Validation) {
  EXPECT_EQ(kind_of([] { SearchBudget{}.validate(); }), ErrorKind::Usage);
  EXPECT_NO_THROW(SearchBudget::unlimited().validate());
  EXPECT_NO_THROW((SearchBudget{100, std::nullopt, 1, false}.validate()));
  EXPECT_NO_THROW((SearchBudget{std::nullopt, 1.0, 1, false}.validate()));
}

TEST(PointSpaceTest, IndexRoundTripAndOrder) {
  const auto f = gf::standard_field(3);
  const PointSpace s(f, 3);
  ASSERT_EQ(s.size(), 27u);
  for (std::size_t i = 0; i < s.size(); ++i) {
    EXPECT_EQ(s.index_of(s.point(i)), i);
    if (i > 0) EXPECT_LT(s.point(i - 1), s.point(i));
  }
  EXPECT_EQ(s.point(0), gf::zero_point(3));
}

TEST(PointSpaceTest, PredicatesMatchOracle) {
  for (std::uint32_t q : {3u, 4u, 9u}) {
    const auto f = gf::standard_field(q);
    const auto o = testutil::oracle_field(f);
    const PointSpace s(f, 2);
    std::mt19937_64 rng(q);
    for (int t = 0; t < 3000; ++t) {
      const std::size_t x = rng() % s.size(), y = rng() % s.size(), z = rng() % s.size();
      const auto vx = testutil::to_vec(s.point(x));
      const auto vy = testutil::to_vec(s.point(y));
      const auto vz = testutil::to_vec(s.point(z));
      ASSERT_EQ(s.right_angle(x, y, z), oracle::right_angle(o, vx, vy, vz));
      ASSERT_EQ(s.conflict(x, y, z), oracle::right_angle(o, vx, vy, vz) || oracle::right_angle(o, vy, vx, vz) ||
                                         oracle::right_angle(o, vz, vx, vy));
    }
  }
}

TEST(PointSpaceTest, OrbitMinIsCanonical) {
  std::mt19937_64 rng(61);
  for (std::uint32_t q : {3u, 5u, 9u}) {
    const auto f = gf::standard_field(q);
    const PointSpace s(f, 3);
    for (std::size_t i = 0; i < s.size(); ++i) {
      const auto m = s.orbit_min(i);
      ASSERT_LE(m, i);
      ASSERT_EQ(s.orbit_min(m), m);
      auto p = s.point(i);
      std::shuffle(p.coords.begin(), p.coords.end(), rng);
      p = gf::scale(f, testutil::random_nonzero(f, rng), p);
      ASSERT_EQ(s.orbit_min(s.index_of(p)), m);
    }
  }
}

TEST(Exhaustive, Examples) {
  const auto unlimited = SearchBudget::unlimited();
  for (std::uint32_t q : {3u, 5u}) {
    const auto r = exhaustive_max(gf::standard_field(q), 1, unlimited);
    EXPECT_EQ(r.size, q);
    EXPECT_EQ(r.status, Status::Exact);
    expect_free(r);
  }
  const auto r23 = exhaustive_max(gf::standard_field(3), 2, unlimited);
  EXPECT_EQ(r23.status, Status::Exact);
  EXPECT_GE(r23.size, 3u);
  EXPECT_LE(r23.size, 13u);
  expect_free(r23);
  EXPECT_EQ(kind_of([&] { exhaustive_max(gf::standard_field(5), 2, unlimited); }), ErrorKind::TooLarge);
}

// Exact solvers agree with each other and with the include/exclude oracle.
TEST(BranchAndBound, AgreesWithOracles) {
  const auto unlimited = SearchBudget::unlimited();
  for (auto [n, q] : std::vector<std::pair<std::size_t, std::uint32_t>>{{1, 3}, {1, 5}, {1, 7}, {2, 2}, {2, 3}, {3, 2}, {2, 4}, {2, 5}, {3, 3}}) {
    const auto f = gf::standard_field(q);
    const auto plain = branch_and_bound_max(f, n, unlimited);
    const auto orbit = branch_and_bound_max(f, n, unlimited, {true, nullptr});
    EXPECT_EQ(plain.status, Status::Exact);
    EXPECT_EQ(orbit.status, Status::Exact);
    EXPECT_EQ(plain.size, orbit.size) << n << " " << q;
    EXPECT_EQ(plain.size, oracle::max_free_size(testutil::oracle_field(f), static_cast<int>(n))) << n << " " << q;
    expect_free(plain);
    expect_free(orbit);
    std::size_t total = 1;
    for (std::size_t i = 0; i < n; ++i) total *= q;
    if (total <= 12) EXPECT_EQ(exhaustive_max(f, n, unlimited).size, plain.size);
  }
}

TEST(BranchAndBound, KnownSmallValues) {
  const auto unlimited = SearchBudget::unlimited();
  const auto f3 = gf::standard_field(3);
  EXPECT_EQ(branch_and_bound_max(f3, 2, unlimited).size, 3u);
  EXPECT_EQ(branch_and_bound_max(f3, 3, unlimited, {true, nullptr}).size, 5u);
  EXPECT_EQ(branch_and_bound_max(f3, 4, unlimited, {true, nullptr}).size, 6u);
  EXPECT_EQ(branch_and_bound_max(gf::standard_field(5), 2, unlimited).size, 5u);
  EXPECT_EQ(branch_and_bound_max(gf::standard_field(7), 2, unlimited, {true, nullptr}).size, 7u);
}

TEST(BranchAndBound, MonotoneInDimension) {
  const auto unlimited = SearchBudget::unlimited();
  const auto f = gf::standard_field(3);
  std::size_t prev = 0;
  for (std::size_t n = 1; n <= 4; ++n) {
    const auto r = branch_and_bound_max(f, n, unlimited, {true, nullptr});
    EXPECT_GE(r.size, prev);
    prev = r.size;
  }
}

TEST(BranchAndBound, ThreadsAndRepeatsGiveSameResult) {
  const auto f = gf::standard_field(3);
  const auto base = branch_and_bound_max(f, 3, SearchBudget::unlimited());
  for (unsigned threads : {1u, 2u, 4u}) {
    const auto r = branch_and_bound_max(f, 3, SearchBudget::unlimited(threads));
    EXPECT_EQ(r.size, base.size);
    EXPECT_EQ(r.status, Status::Exact);
    expect_free(r);
  }
  EXPECT_EQ(branch_and_bound_max(f, 3, SearchBudget::unlimited()).best, base.best);
}

TEST(BranchAndBound, NodeBudgetGivesLowerBound) {
  const auto f = gf::standard_field(3);
  const auto r = branch_and_bound_max(f, 4, SearchBudget{50, std::nullopt, 1, false});
  EXPECT_EQ(r.status, Status::LowerBound);
  EXPECT_LE(r.size, 6u);
  expect_free(r);
  ASSERT_TRUE(r.checkpoint);
  EXPECT_EQ(r.checkpoint->version, Checkpoint::kVersion);
}

TEST(BranchAndBound, ResumeFromCheckpointReachesExactValue) {
  const auto f = gf::standard_field(3);
  for (bool orbit : {false, true}) {
    const auto partial = branch_and_bound_max(f, 3, SearchBudget{20, std::nullopt, 1, false}, {orbit, nullptr});
    ASSERT_EQ(partial.status, Status::LowerBound);
    ASSERT_TRUE(partial.checkpoint);
    const auto restored = serialize::checkpoint_from_json(serialize::to_json(*partial.checkpoint));
    const auto resumed = branch_and_bound_max(f, 3, SearchBudget::unlimited(), {orbit, &restored});
    EXPECT_EQ(resumed.status, Status::Exact);
    EXPECT_EQ(resumed.size, 5u);
    expect_free(resumed);
  }
}

TEST(BranchAndBound, MismatchedCheckpointIsRejected) {
  const auto f = gf::standard_field(3);
  const auto partial = branch_and_bound_max(f, 3, SearchBudget{20, std::nullopt, 1, false});
  ASSERT_TRUE(partial.checkpoint);
  EXPECT_THROW(branch_and_bound_max(f, 2, SearchBudget::unlimited(), {false, &*partial.checkpoint}), Error);
  EXPECT_THROW(branch_and_bound_max(f, 3, SearchBudget::unlimited(), {true, &*partial.checkpoint}), Error);
}

TEST(Greedy, ValidAndDeterministic) {
  for (std::uint32_t q : {3u, 5u, 9u}) {
    const auto f = gf::standard_field(q);
    const auto a = greedy_lower(f, 2, 7, 5);
    const auto b = greedy_lower(f, 2, 7, 5);
    EXPECT_EQ(a.best, b.best);
    EXPECT_EQ(a.status, Status::LowerBound);
    expect_free(a);
  }
}

TEST(Greedy, ReachesSixInF3To4) {
  const auto r = greedy_lower(gf::standard_field(3), 4, 1, 50);
  EXPECT_GE(r.size, 6u);
  expect_free(r);
}

TEST(Greedy, NeverExceedsExactValue) {
  const auto f = gf::standard_field(3);
  const auto exact = branch_and_bound_max(f, 3, SearchBudget::unlimited());
  for (std::uint64_t seed = 0; seed < 10; ++seed) EXPECT_LE(greedy_lower(f, 3, seed, 3).size, exact.size);
}

TEST(Serialize, SearchResultRoundTrip) {
  const auto r = branch_and_bound_max(gf::standard_field(3), 2, SearchBudget::unlimited(), {true, nullptr});
  const auto j = serialize::to_json(r);
  const auto back = serialize::search_result_from_json(j);
  EXPECT_EQ(back.best, r.best);
  EXPECT_EQ(back.size, r.size);
  EXPECT_EQ(back.status, r.status);
  EXPECT_EQ(serialize::to_json(back), j);
}

}  // namespace
}  // namespace rightangle::search
