#include <atlapprox/state_set.hpp>

#include <gtest/gtest.h>

#include <random>
#include <set>
#include <unordered_set>

using atlapprox::StateSet;
using atlapprox::StateSetHash;
using atlapprox::state_id;

TEST(StateSet, EmptyAndFull)
{
  StateSet e(130), f = StateSet::full(130);
  EXPECT_TRUE(e.empty());
  EXPECT_EQ(e.count(), 0u);
  EXPECT_EQ(f.count(), 130u);
  EXPECT_EQ(~e, f);
  EXPECT_EQ(~f, e);
  EXPECT_TRUE(e.is_subset_of(f));
  EXPECT_FALSE(f.is_subset_of(e));
}

TEST(StateSet, ComplementStaysInsideUniverse)
{
  StateSet s(65, {0, 64});
  StateSet c = ~s;
  EXPECT_EQ(c.count(), 63u);
  EXPECT_FALSE(c.contains(64));
  EXPECT_EQ((c | s).count(), 65u);
}

TEST(StateSet, IterationIsAscending)
{
  StateSet s(200, {199, 3, 64, 63, 128});
  std::vector<state_id> v(s.begin(), s.end());
  EXPECT_EQ(v, (std::vector<state_id>{3, 63, 64, 128, 199}));
  EXPECT_EQ(s.to_vector(), v);
}

// Random operations checked against std::set.
TEST(StateSet, AgreesWithStdSet)
{
  std::mt19937 rng(7);
  for (int round = 0; round < 200; ++round)
    {
      const std::size_t n = 1 + rng() % 150;
      StateSet a(n), b(n);
      std::set<state_id> sa, sb;
      for (std::size_t i = 0; i < n; ++i)
        {
          if (rng() % 3 == 0)
            a.insert(i), sa.insert(i);
          if (rng() % 2 == 0)
            b.insert(i), sb.insert(i);
        }
      auto as_set = [](const StateSet& s) { return std::set<state_id>(s.begin(), s.end()); };
      std::set<state_id> u = sa, i, d;
      u.insert(sb.begin(), sb.end());
      for (auto x : sa)
        (sb.contains(x) ? i : d).insert(x);
      EXPECT_EQ(as_set(a | b), u);
      EXPECT_EQ(as_set(a & b), i);
      EXPECT_EQ(as_set(a - b), d);
      EXPECT_EQ(a.intersects(b), !i.empty());
      EXPECT_EQ(a.is_subset_of(b), d.empty());
      EXPECT_EQ(a.count(), sa.size());
    }
}

TEST(StateSet, EraseAndClear)
{
  StateSet s(10, {1, 2, 3});
  s.erase(2);
  EXPECT_FALSE(s.contains(2));
  EXPECT_EQ(s.count(), 2u);
  s.clear();
  EXPECT_TRUE(s.empty());
  EXPECT_EQ(s.size(), 10u);
}

TEST(StateSet, HashUsableInContainers)
{
  std::unordered_set<StateSet, StateSetHash> seen;
  seen.insert(StateSet(8, {1, 2}));
  seen.insert(StateSet(8, {2, 1}));
  seen.insert(StateSet(9, {1, 2}));
  EXPECT_EQ(seen.size(), 2u);
}
