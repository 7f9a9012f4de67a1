#pragma once

// Brute-force reference implementations used by the tests.  They share
// only the Model accessors with the library: neighbourhoods, assignment
// enumeration, path conditions and strategy search are all redone here in
// the most direct way.

#include <atlapprox/icgs.hpp>
#include <atlapprox/formula.hpp>

#include <functional>
#include <optional>
#include <set>
#include <vector>

namespace oracle
{
  using namespace atlapprox;
  using Set = std::set<state_id>;

  inline Set to_set(const StateSet& s)
  {
    Set out;
    for (state_id q = 0; q < s.size(); ++q)
      if (s.contains(q))
        out.insert(q);
    return out;
  }

  inline bool related(const Model& m, agent_id a, state_id x, state_id y)
  {
    return m.epistemic(a).block_of[x] == m.epistemic(a).block_of[y];
  }

  /// [q] under ~E (union of the members' relations; {q} when empty).
  inline Set everybody(const Model& m, const std::vector<agent_id>& c, state_id q)
  {
    Set out{q};
    for (state_id s = 0; s < m.num_states(); ++s)
      for (agent_id a : c)
        if (related(m, a, q, s))
          out.insert(s);
    return out;
  }

  /// [q] under ~C: closure of ~E by repeated expansion.
  inline Set common(const Model& m, const std::vector<agent_id>& c, state_id q)
  {
    Set out{q};
    for (bool grew = true; grew;)
      {
        grew = false;
        for (state_id s : Set(out))
          for (state_id t : everybody(m, c, s))
            grew |= out.insert(t).second;
      }
    return out;
  }

  /// choice[member index][state], valid on the domain
  using Choice = std::vector<std::vector<action_id>>;

  /// Every uniform choice on `dom`: a member's states in the same block
  /// of `dom` get the same action.  fn returns true to stop.
  inline bool for_each_choice(const Model& m, const std::vector<agent_id>& c, const Set& dom,
                              const std::function<bool(const Choice&)>& fn)
  {
    struct Slot
    {
      std::size_t member;
      std::vector<state_id> states;
      std::vector<action_id> options;
    };
    std::vector<Slot> slots;
    for (std::size_t i = 0; i < c.size(); ++i)
      {
        Set done;
        for (state_id q : dom)
          {
            if (done.contains(q))
              continue;
            Slot s{i, {}, {}};
            for (state_id r : dom)
              if (related(m, c[i], q, r))
                {
                  s.states.push_back(r);
                  done.insert(r);
                }
            auto d = m.protocol(c[i], q);
            s.options.assign(d.begin(), d.end());
            slots.push_back(std::move(s));
          }
      }
    Choice ch(c.size(), std::vector<action_id>(m.num_states(), no_action));
    std::function<bool(std::size_t)> rec = [&](std::size_t k) -> bool {
      if (k == slots.size())
        return fn(ch);
      for (action_id a : slots[k].options)
        {
          for (state_id q : slots[k].states)
            ch[slots[k].member][q] = a;
          if (rec(k + 1))
            return true;
        }
      return false;
    };
    return rec(0);
  }

  /// Successors of q when members play `ch` at q (everyone else free).
  /// Returns nullopt if some matching joint action has no transition.
  inline std::optional<Set> successors(const Model& m, const std::vector<agent_id>& c,
                                       const Choice& ch, state_id q)
  {
    Set out;
    for (std::size_t j = 0; j < m.joint_count(q); ++j)
      {
        bool match = true;
        for (std::size_t i = 0; i < c.size(); ++i)
          if (ch[i][q] != no_action && m.action_of(q, j, c[i]) != ch[i][q])
            match = false;
        if (!match)
          continue;
        if (m.successor(q, j) == no_state)
          return std::nullopt;
        out.insert(m.successor(q, j));
      }
    return out;
  }

  inline std::vector<agent_id> members(const Model& m, const std::vector<std::string>& names)
  {
    std::vector<agent_id> c;
    for (const auto& n : names)
      c.push_back(m.agent(n));
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
    return c;
  }

  inline Set diamond(const Model& m, const std::vector<agent_id>& c, const Set& target)
  {
    Set out;
    for (state_id q = 0; q < m.num_states(); ++q)
      {
        const Set dom = everybody(m, c, q);
        const bool ok = for_each_choice(m, c, dom, [&](const Choice& ch) {
          for (state_id s : dom)
            {
              auto succ = successors(m, c, ch, s);
              if (!succ)
                return false;
              for (state_id t : *succ)
                if (!target.contains(t))
                  return false;
            }
          return true;
        });
        if (ok)
          out.insert(q);
      }
    return out;
  }

  /// Every path from q (under ch) takes a step and then hits target,
  /// staying inside B before that: the states of B \ target reachable
  /// from q must have all successors in target or B, and the graph they
  /// span must be acyclic.
  inline bool reaches_within(const Model& m, const std::vector<agent_id>& c, const Choice& ch,
                             const Set& B, const Set& target, state_id q)
  {
    // explicit path enumeration, depth-bounded by |B| + 1
    std::function<bool(state_id, Set&)> all_paths = [&](state_id s, Set& on_path) -> bool {
      auto succ = successors(m, c, ch, s);
      if (!succ || succ->empty())
        return false;
      for (state_id t : *succ)
        {
          if (target.contains(t))
            continue;
          if (!B.contains(t) || on_path.contains(t))
            return false;  // leaves B, or can loop forever
          on_path.insert(t);
          const bool ok = all_paths(t, on_path);
          on_path.erase(t);
          if (!ok)
            return false;
        }
      return true;
    };
    Set on_path;
    if (!target.contains(q))
      on_path.insert(q);
    return all_paths(q, on_path);
  }

  inline Set steadfast(const Model& m, const std::vector<agent_id>& c, const Set& target,
                       Neighborhood nb = Neighborhood::C)
  {
    Set out;
    for (state_id q = 0; q < m.num_states(); ++q)
      {
        const Set B = nb == Neighborhood::C ? common(m, c, q) : everybody(m, c, q);
        const bool ok = for_each_choice(m, c, B, [&](const Choice& ch) {
          for (state_id s : B)
            if (!reaches_within(m, c, ch, B, target, s))
              return false;
          return true;
        });
        if (ok)
          out.insert(q);
      }
    return out;
  }

  /// Outcome condition of one memoryless strategy from `start`.
  inline bool wins(const Model& m, const std::vector<agent_id>& c, const Choice& ch, Temporal t,
                   const Set* psi, const Set& phi, const Set& start)
  {
    if (t == Temporal::next)
      {
        for (state_id s : start)
          {
            auto succ = successors(m, c, ch, s);
            if (!succ)
              return false;
            for (state_id x : *succ)
              if (!phi.contains(x))
                return false;
          }
        return true;
      }
    if (t == Temporal::always)
      {
        // every reachable state satisfies phi
        Set seen(start.begin(), start.end());
        std::vector<state_id> todo(start.begin(), start.end());
        while (!todo.empty())
          {
            const state_id s = todo.back();
            todo.pop_back();
            if (!phi.contains(s))
              return false;
            auto succ = successors(m, c, ch, s);
            if (!succ)
              return false;
            for (state_id x : *succ)
              if (seen.insert(x).second)
                todo.push_back(x);
          }
        return true;
      }
    // psi U phi: on every path a phi-state comes, psi holding before it
    std::function<bool(state_id, Set&)> ok = [&](state_id s, Set& on_path) -> bool {
      if (phi.contains(s))
        return true;
      if ((psi && !psi->contains(s)) || on_path.contains(s))
        return false;
      auto succ = successors(m, c, ch, s);
      if (!succ)
        return false;
      on_path.insert(s);
      bool all = true;
      for (state_id x : *succ)
        if (!ok(x, on_path))
          {
            all = false;
            break;
          }
      on_path.erase(s);
      return all;
    };
    for (state_id s : start)
      {
        Set on_path;
        if (!ok(s, on_path))
          return false;
      }
    return true;
  }

  /// Number of global uniform strategies of c.
  inline double strategy_count(const Model& m, const std::vector<agent_id>& c)
  {
    double n = 1;
    for (agent_id a : c)
      for (const auto& b : m.epistemic(a).blocks)
        n *= static_cast<double>(m.protocol(a, b.front()).size());
    return n;
  }

  /// ⟨⟨c⟩⟩_ir by enumerating every global uniform memoryless strategy.
  inline Set strategic_ir(const Model& m, const std::vector<agent_id>& c, Temporal t,
                          const Set* psi, const Set& phi, bool subjective = true)
  {
    Set all;
    for (state_id q = 0; q < m.num_states(); ++q)
      all.insert(q);
    Set out;
    for (state_id q = 0; q < m.num_states(); ++q)
      {
        const Set start = subjective ? everybody(m, c, q) : Set{q};
        if (for_each_choice(m, c, all, [&](const Choice& ch) {
              return wins(m, c, ch, t, psi, phi, start);
            }))
          out.insert(q);
      }
    return out;
  }

  /// ⟨⟨c⟩⟩_IR: per-state choices, solved by the textbook fixpoints over
  /// an explicitly computed one-step ability.
  inline Set strategic_IR(const Model& m, const std::vector<agent_id>& c, Temporal t,
                          const Set* psi, const Set& phi)
  {
    auto pre = [&](const Set& target) {
      Set out;
      for (state_id q = 0; q < m.num_states(); ++q)
        {
          const bool ok = for_each_choice(m, c, Set{q}, [&](const Choice& ch) {
            auto succ = successors(m, c, ch, q);
            if (!succ)
              return false;
            for (state_id x : *succ)
              if (!target.contains(x))
                return false;
            return true;
          });
          if (ok)
            out.insert(q);
        }
      return out;
    };
    auto meet = [](const Set& a, const Set& b) {
      Set out;
      for (state_id x : a)
        if (b.contains(x))
          out.insert(x);
      return out;
    };
    if (t == Temporal::next)
      return pre(phi);
    if (t == Temporal::always)
      {
        Set z = phi;
        for (;;)
          {
            Set next = meet(phi, pre(z));
            if (next == z)
              return z;
            z = next;
          }
      }
    Set z;
    for (;;)
      {
        Set next = phi;
        for (state_id x : pre(z))
          if (!psi || psi->contains(x))
            next.insert(x);
        if (next == z)
          return z;
        z = next;
      }
  }

  /// Evaluates a flat formula: booleans, atoms, K/E/C and strategic
  /// operators over propositional goals.  `ir` picks the exact ir oracle
  /// for ir operators; IR operators always use the IR oracle.
  inline Set eval_flat(const Model& m, const Formula& g, bool subjective = true)
  {
    Set all;
    for (state_id q = 0; q < m.num_states(); ++q)
      all.insert(q);
    auto minus = [&](const Set& a) {
      Set out;
      for (state_id q : all)
        if (!a.contains(q))
          out.insert(q);
      return out;
    };
    switch (g->op)
      {
      case Op::constant:
        return g->value ? all : Set{};
      case Op::atom:
        return m.has_atom(g->name) ? to_set(m.label(g->name)) : Set{};
      case Op::not_:
        return minus(eval_flat(m, g->lhs, subjective));
      case Op::and_:
      case Op::or_:
      case Op::implies:
        {
          Set a = eval_flat(m, g->lhs, subjective), b = eval_flat(m, g->rhs, subjective);
          if (g->op == Op::implies)
            a = minus(a);
          Set out;
          for (state_id q : all)
            if (g->op == Op::and_ ? (a.contains(q) && b.contains(q)) : (a.contains(q) || b.contains(q)))
              out.insert(q);
          return out;
        }
      case Op::know:
      case Op::everybody:
      case Op::common:
        {
          const auto c = members(m, g->agents);
          const Set in = eval_flat(m, g->lhs, subjective);
          Set out;
          for (state_id q : all)
            {
              const Set cls = g->op == Op::common ? common(m, c, q) : everybody(m, c, q);
              if (std::all_of(cls.begin(), cls.end(), [&](state_id s) { return in.contains(s); }))
                out.insert(q);
            }
          return out;
        }
      case Op::strategic:
        {
          const auto c = members(m, g->agents);
          Set psi, phi;
          const Set* psi_ptr = nullptr;
          if (g->temporal == Temporal::until)
            {
              psi = eval_flat(m, g->lhs, subjective);
              psi_ptr = &psi;
              phi = eval_flat(m, g->rhs, subjective);
            }
          else
            phi = eval_flat(m, g->lhs, subjective);
          const Temporal t = g->temporal == Temporal::eventually ? Temporal::until : g->temporal;
          return g->semantics == Semantics::ir ? strategic_ir(m, c, t, psi_ptr, phi, subjective)
                                               : strategic_IR(m, c, t, psi_ptr, phi);
        }
      default:
        throw FormulaError("oracle: unsupported operator in " + to_string(g));
      }
  }
}
