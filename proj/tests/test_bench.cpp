#include <atlapprox/bench.hpp>
#include <atlapprox/fixpoint.hpp>
#include <atlapprox/model_io.hpp>

#include <gtest/gtest.h>

using namespace atlapprox;

TEST(SmallModels, SizesAndLabels)
{
  EXPECT_EQ(m0().num_states(), 2u);
  EXPECT_EQ(m1().num_states(), 10u);
  EXPECT_EQ(m2().num_states(), 3u);
  EXPECT_EQ(m3().num_states(), 3u);
  const Model v = m_vote();
  EXPECT_EQ(v.num_states(), 11u);
  EXPECT_EQ(v.label("pun").count(), 4u);
  EXPECT_EQ(m1().label("p"), StateSet(10, {m1().state("qp")}));
  EXPECT_EQ(m3().label("p").count(), 2u);
  for (const Model& m : {m0(), m1(), m2(), m3(), v})
    EXPECT_TRUE(validate(m).ok());
}

TEST(Voting, ProductSizes)
{
  EXPECT_EQ(gen_voting({1}).num_states(), 15u);
  EXPECT_EQ(gen_voting({2}).num_states(), 225u);
  EXPECT_EQ(gen_voting({3}).num_states(), 3375u);
  EXPECT_THROW(gen_voting({0}), ModelError);
  EXPECT_THROW(gen_voting({7}), ModelError);
}

TEST(Voting, Observations)
{
  const Model m = gen_voting({1});
  EXPECT_TRUE(validate(m).ok());
  // four pairs merged for the coercer, voters see everything in their module
  EXPECT_EQ(m.epistemic(m.agent("c")).blocks.size(), 11u);
  EXPECT_EQ(m.epistemic(m.agent("v1")).blocks.size(), 15u);
  const Model two = gen_voting({2});
  EXPECT_TRUE(validate(two).ok());
  EXPECT_EQ(two.epistemic(two.agent("v1")).blocks.size(), 15u);
  EXPECT_EQ(two.epistemic(two.agent("c")).blocks.size(), 121u);
  for (const char* atom : {"vote1_1", "vote1_2", "pun1", "finish1", "pun2"})
    EXPECT_TRUE(two.has_atom(atom)) << atom;
}

TEST(Bridge, SmallestDeal)
{
  const Model m = gen_bridge(BridgeInstance{1, 1, 0});
  EXPECT_TRUE(validate(m).ok());
  EXPECT_EQ(m.num_states(), 11u);
  EXPECT_EQ(bridge_initial_states(m), 2u);
  EXPECT_TRUE(m.has_atom("win"));
  EXPECT_TRUE(m.has_atom("end"));
}

TEST(Bridge, DealIsSeeded)
{
  const BridgeDeal a = deal_bridge({2, 2, 5}), b = deal_bridge({2, 2, 5});
  EXPECT_EQ(a.hands, b.hands);
  EXPECT_EQ(a.played, b.played);
  bool differs = false;
  for (std::uint64_t s = 0; s < 10 && !differs; ++s)
    differs = deal_bridge({2, 2, s}).hands != a.hands;
  EXPECT_TRUE(differs);
  for (const auto& h : a.hands)
    EXPECT_EQ(h.size(), 2u);
  EXPECT_EQ(write_model(gen_bridge(a)), write_model(gen_bridge(b)));
}

TEST(Bridge, DeclarerStepsOutOfItsBlocks)
{
  for (std::uint64_t s = 0; s < 5; ++s)
    {
      const Model m = gen_bridge(BridgeInstance{2, 2, s});
      EXPECT_TRUE(validate(m).ok());
      EXPECT_TRUE(is_lockstep(m, m.agent("S"))) << "seed " << s;
      const Model am = gen_bridge_absentminded(BridgeInstance{2, 2, s});
      EXPECT_TRUE(validate(am).ok());
      EXPECT_FALSE(is_lockstep(am, am.agent("S"))) << "seed " << s;
    }
}

TEST(Random, ValidAndSeeded)
{
  for (std::uint64_t seed = 0; seed < 50; ++seed)
    {
      RandomParams p;
      p.num_states = 3 + seed % 7;
      p.num_agents = 1 + seed % 3;
      p.num_actions = 1 + seed % 3;
      p.epistemic_block_size = 1 + seed % 4;
      p.seed = seed;
      const Model m = gen_random(p);
      EXPECT_TRUE(validate(m).ok()) << "seed " << seed;
      EXPECT_EQ(m.num_states(), p.num_states);
      EXPECT_EQ(write_model(m), write_model(gen_random(p)));
      for (agent_id a = 0; a < m.num_agents(); ++a)
        for (const auto& b : m.epistemic(a).blocks)
          EXPECT_LE(b.size(), p.epistemic_block_size);
    }
}

TEST(Random, Lockstep)
{
  for (std::uint64_t seed = 0; seed < 50; ++seed)
    {
      RandomParams p;
      p.num_states = 6;
      p.num_agents = 2;
      p.epistemic_block_size = 2;
      p.seed = seed;
      p.lockstep_for = 1;
      const Model m = gen_random(p);
      EXPECT_TRUE(validate(m).ok());
      EXPECT_TRUE(is_lockstep(m, 1)) << "seed " << seed;
    }
}

TEST(Rng, BelowIsInRange)
{
  Rng r(1);
  for (int i = 0; i < 1000; ++i)
    EXPECT_LT(r.below(7), 7u);
  EXPECT_EQ(r.below(1), 0u);
}
