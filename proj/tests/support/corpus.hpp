#pragma once

// Seeded random models and flat ATL_ir formulas shared by the property
// tests and the acceptance run.

#include <atlapprox/bench.hpp>
#include <atlapprox/formula.hpp>

#include <string>
#include <vector>

namespace corpus
{
  using namespace atlapprox;

  /// Model i of the corpus: at most 8 states, 2 agents, 3 actions.
  inline RandomParams params(std::uint64_t i)
  {
    Rng r(i * 7919 + 17);
    RandomParams p;
    p.num_states = 2 + r.below(7);
    p.num_agents = 1 + r.below(2);
    p.num_actions = 1 + r.below(3);
    p.epistemic_block_size = 1 + r.below(3);
    p.num_atoms = 2;
    p.seed = i;
    return p;
  }

  inline Model model(std::uint64_t i) { return gen_random(params(i)); }

  /// Lockstep variant for agent "1": needs at least two blocks.
  inline Model lockstep_model(std::uint64_t i)
  {
    RandomParams p = params(i);
    p.num_states = std::max<std::size_t>(p.num_states, 3);
    p.epistemic_block_size = std::min(p.epistemic_block_size, p.num_states - 1);
    p.lockstep_for = 0;
    return gen_random(p);
  }

  inline std::vector<std::string> coalition(Rng& r, std::size_t agents)
  {
    std::vector<std::string> c;
    for (std::size_t a = 1; a <= agents; ++a)
      if (r.coin())
        c.push_back(std::to_string(a));
    return c;
  }

  /// Literal or small conjunction/disjunction over p and q.
  inline Formula goal(Rng& r)
  {
    auto lit = [&] {
      Formula a = f::atom(r.coin() ? "p" : "q");
      return r.below(3) == 0 ? f::not_(a) : a;
    };
    switch (r.below(4))
      {
      case 0: return f::and_(lit(), lit());
      case 1: return f::or_(lit(), lit());
      default: return lit();
      }
  }

  inline Formula strategic(Rng& r, std::size_t agents)
  {
    const auto c = coalition(r, agents);
    switch (r.below(4))
      {
      case 0: return f::next(c, goal(r));
      case 1: return f::always(c, goal(r));
      case 2: return f::eventually(c, goal(r));
      default: return f::until(c, goal(r), goal(r));
      }
  }

  /// A flat ATL_ir formula: a strategic operator, possibly negated or
  /// combined with one more.
  inline Formula formula(Rng& r, std::size_t agents)
  {
    switch (r.below(6))
      {
      case 0: return f::not_(strategic(r, agents));
      case 1: return f::and_(strategic(r, agents), strategic(r, agents));
      case 2: return f::or_(strategic(r, agents), goal(r));
      default: return strategic(r, agents);
      }
  }
}
