#include <atlapprox/bench.hpp>
#include <atlapprox/fixpoint.hpp>
#include <atlapprox/model_io.hpp>

#include "support/corpus.hpp"

#include <gtest/gtest.h>

#ifndef ATLAPPROX_SOURCE_DIR
#define ATLAPPROX_SOURCE_DIR "."
#endif

using namespace atlapprox;

namespace
{
  const char* two_states = R"(# comment
agents:
  1
states:
  q0: p
  q1
actions:
  a
protocol:
  1 q0: a
  1 q1: a
transitions:
  q0 (a) -> q1   # trailing comment
  q1 (a) -> q1
epistemic:
  1: {q0 q1}
)";

  bool same_structure(const Model& a, const Model& b)
  {
    if (a.num_states() != b.num_states() || a.agent_names() != b.agent_names()
        || a.state_names() != b.state_names())
      return false;
    for (agent_id ag = 0; ag < a.num_agents(); ++ag)
      if (a.epistemic(ag).block_of != b.epistemic(ag).block_of)
        return false;
    for (state_id q = 0; q < a.num_states(); ++q)
      {
        if (a.joint_count(q) != b.joint_count(q))
          return false;
        for (std::size_t j = 0; j < a.joint_count(q); ++j)
          if (a.successor(q, j) != b.successor(q, j))
            return false;
      }
    // atoms with no states leave no trace in the text
    auto extension = [](const Model& m, const std::string& p) {
      return m.has_atom(p) ? m.label(p) : StateSet(m.num_states());
    };
    for (const auto* m : {&a, &b})
      for (const auto& p : m->atom_names())
        if (extension(a, p) != extension(b, p))
          return false;
    return true;
  }
}

TEST(ModelText, Reads)
{
  const Model m = read_model(std::string_view(two_states));
  EXPECT_EQ(m.num_states(), 2u);
  EXPECT_EQ(m.label("p"), StateSet(2, {0}));
  EXPECT_EQ(m.successors(0), std::vector<state_id>{1});
  EXPECT_EQ(m.epistemic(0).blocks.size(), 1u);
  EXPECT_TRUE(validate(m).ok());
}

TEST(ModelText, LabelKeyword)
{
  const std::string text = std::string(two_states).replace(std::string(two_states).find("q0: p"), 5,
                                                           "q0 label: p");
  EXPECT_TRUE(same_structure(read_model(std::string_view(text)),
                             read_model(std::string_view(two_states))));
}

TEST(ModelText, RoundTrip)
{
  for (const Model& m : {m0(), m1(), m2(), m3(), m_vote(), gen_voting({2}),
                         gen_bridge(BridgeInstance{2, 2, 1})})
    {
      const std::string text = write_model(m);
      const Model back = read_model(std::string_view(text));
      EXPECT_TRUE(same_structure(m, back));
      EXPECT_EQ(write_model(back), text);
    }
  for (std::uint64_t i = 0; i < 50; ++i)
    {
      const Model m = corpus::model(i);
      EXPECT_TRUE(same_structure(m, read_model(std::string_view(write_model(m))))) << i;
    }
}

TEST(ModelText, ErrorsHaveLines)
{
  auto line_of = [](const std::string& text) -> std::size_t {
    try
      {
        read_model(std::string_view(text));
      }
    catch (const ParseError& e)
      {
        return e.line();
      }
    return 0;
  };
  EXPECT_EQ(line_of("stuff\nagents:\n  1\n"), 1u);
  EXPECT_EQ(line_of("agents:\n  1 1\n"), 2u);
  EXPECT_EQ(line_of("agents:\n  1\nstates:\n  q0\nactions:\n  a\nprotocol:\n  2 q0: a\n"), 8u);
  EXPECT_EQ(line_of("agents:\n  1\nstates:\n  q0\nactions:\n  a\ntransitions:\n  q0 (a) -> q9\n"), 8u);
  EXPECT_EQ(line_of("agents:\n  1\nstates:\n  q0\n  q0\n"), 5u);
  EXPECT_EQ(line_of("agents:\n  1\nstates:\n  q0 $\n"), 4u);
}

TEST(ModelText, MalformedModelStillLoads)
{
  const Model m = load_model(ATLAPPROX_SOURCE_DIR "/tests/data/broken.model");
  const ValidationReport r = validate(m);
  EXPECT_FALSE(r.ok());
  EXPECT_EQ(r.count(Violation::Kind::missing_transition), 1u);
  EXPECT_EQ(r.count(Violation::Kind::non_uniform), 1u);
}

TEST(ModelText, ShippedModels)
{
  const std::pair<const char*, Model (*)()> files[] = {
    {"m0", m0}, {"m1", m1}, {"m2", m2}, {"m3", m3}, {"m_vote", m_vote}};
  for (const auto& [name, make] : files)
    {
      const Model m = load_model(std::string(ATLAPPROX_SOURCE_DIR "/models/") + name + ".model");
      EXPECT_TRUE(validate(m).ok()) << name;
      EXPECT_TRUE(same_structure(m, make())) << name;
    }
  EXPECT_THROW(load_model("/nonexistent.model"), ModelError);
}
