#pragma once

// Denotational evaluation of alternation-free epistemic mu-calculus:
// the next-step operator <A>, Reach, the steadfast operator, knowledge
// modalities, and perfect-information strategic operators via the
// controllable predecessor.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "formula.hpp"
#include "icgs.hpp"
#include "state_set.hpp"

namespace atlapprox
{
  using Valuation = std::map<std::string, StateSet>;

  inline constexpr std::size_t default_assignment_budget = std::size_t{1} << 20;

  // ---------------------------------------------------------------------
  // Controllable predecessor (perfect information)

  /// {q | some choice of A at q forces every successor into target}
  inline StateSet controllable_pre(const Model& m, const Coalition& c, const StateSet& target)
  {
    StateSet out(m.num_states());
    std::vector<char> good;
    for (state_id q = 0; q < m.num_states(); ++q)
      {
        std::size_t tuples = 1;
        for (agent_id a : c)
          tuples *= m.protocol(a, q).size();
        good.assign(tuples, 1);
        for (std::size_t j = 0; j < m.joint_count(q); ++j)
          {
            std::size_t t = 0;
            for (agent_id a : c)
              t = t * m.protocol(a, q).size() + m.choice_of(q, j, a);
            const state_id s = m.successor(q, j);
            if (s == no_state || !target.contains(s))
              good[t] = 0;
          }
        if (std::find(good.begin(), good.end(), 1) != good.end())
          out.insert(q);
      }
    return out;
  }

  // ---------------------------------------------------------------------
  // Uniform choices on a small domain, solved by backtracking

  namespace detail
  {
    /// The coalition's choice problem on a list of states.  Per state,
    /// `tuple` enumerates the members' protocol positions in mixed radix
    /// (first member most significant); `succ[l][t]` lists the successors
    /// of local state l under tuple t.
    class LocalGame
    {
    public:
      LocalGame(const Model& m, const Coalition& c, std::vector<state_id> states)
        : c_(c), states_(std::move(states))
      {
        const std::size_t nm = c.size();
        const std::size_t nl = states_.size();
        radix_.resize(nl);
        succ_.resize(nl);
        piece_of_.assign(nl, std::vector<std::uint32_t>(nm));
        for (std::size_t l = 0; l < nl; ++l)
          {
            const state_id q = states_[l];
            std::size_t tuples = 1;
            for (agent_id a : c)
              {
                radix_[l].push_back(m.protocol(a, q).size());
                tuples *= m.protocol(a, q).size();
              }
            succ_[l].resize(tuples);
            for (std::size_t j = 0; j < m.joint_count(q); ++j)
              {
                std::size_t t = 0;
                for (std::size_t i = 0; i < nm; ++i)
                  t = t * radix_[l][i] + m.choice_of(q, j, c.members()[i]);
                succ_[l][t].push_back(m.successor(q, j));
              }
            for (auto& v : succ_[l])
              {
                std::sort(v.begin(), v.end());
                v.erase(std::unique(v.begin(), v.end()), v.end());
              }
          }

        // pieces: one per (member, block) meeting the domain, ordered by
        // first local state, then member
        std::vector<std::map<std::uint32_t, std::uint32_t>> by_block(nm);
        for (std::size_t l = 0; l < nl; ++l)
          for (std::size_t i = 0; i < nm; ++i)
            {
              const agent_id a = c.members()[i];
              const auto block = m.epistemic(a).block_of[states_[l]];
              auto [it, fresh] = by_block[i].try_emplace(block, static_cast<std::uint32_t>(pieces_.size()));
              if (fresh)
                pieces_.push_back({i, {}, m.protocol(a, states_[l]).size()});
              pieces_[it->second].locals.push_back(static_cast<std::uint32_t>(l));
              piece_of_[l][i] = it->second;
            }
        completes_at_.assign(nl, 0);
        for (std::size_t l = 0; l < nl; ++l)
          for (std::size_t i = 0; i < nm; ++i)
            completes_at_[l] = std::max(completes_at_[l], piece_of_[l][i]);
        completed_by_.resize(pieces_.size());
        for (std::size_t l = 0; l < nl; ++l)
          if (nm > 0)
            completed_by_[completes_at_[l]].push_back(static_cast<std::uint32_t>(l));
      }

      std::size_t size() const noexcept { return states_.size(); }
      state_id state(std::size_t l) const { return states_[l]; }
      const std::vector<state_id>& successors(std::size_t l, std::size_t tuple) const
      {
        return succ_[l][tuple];
      }
      std::size_t num_tuples(std::size_t l) const { return succ_[l].size(); }

      /// Number of uniform assignments on the domain.
      double count() const
      {
        double n = 1;
        for (const auto& p : pieces_)
          n *= static_cast<double>(p.options);
        return n;
      }

      /// Searches for an assignment: `local_ok(l, tuple)` prunes as soon
      /// as all pieces covering l are fixed, `leaf_ok(tuples)` judges a
      /// complete assignment given each local state's tuple.  Throws
      /// BudgetExceeded after `budget` search nodes.
      template <typename LocalOk, typename LeafOk>
      bool solve(LocalOk&& local_ok, LeafOk&& leaf_ok, std::size_t budget,
                 std::size_t* nodes_out = nullptr)
      {
        const std::size_t nl = states_.size();
        std::vector<std::size_t> digit(pieces_.size(), 0);
        std::vector<std::size_t> tuple(nl, 0);
        std::size_t nodes = 0;

        auto tuple_of = [&](std::size_t l) {
          std::size_t t = 0;
          for (std::size_t i = 0; i < c_.size(); ++i)
            t = t * radix_[l][i] + digit[piece_of_[l][i]];
          return t;
        };

        if (pieces_.empty())
          {
            for (std::size_t l = 0; l < nl; ++l)
              if (!local_ok(l, std::size_t{0}))
                return false;
            return leaf_ok(tuple);
          }

        // iterative depth-first search over piece digits
        std::size_t depth = 0;
        bool descending = true;
        for (;;)
          {
            if (descending)
              {
                digit[depth] = 0;
                if (pieces_[depth].options == 0)
                  {
                    descending = false;
                    continue;
                  }
              }
            else if (++digit[depth] >= pieces_[depth].options)
              {
                if (depth == 0)
                  break;
                --depth;
                continue;
              }
            if (++nodes > budget)
              {
                if (nodes_out)
                  *nodes_out = nodes;
                throw BudgetExceeded("uniform choices on " + std::to_string(nl) + " states",
                                     count(), budget);
              }
            bool ok = true;
            for (std::uint32_t l : completed_by_[depth])
              {
                tuple[l] = tuple_of(l);
                if (!local_ok(l, tuple[l]))
                  {
                    ok = false;
                    break;
                  }
              }
            if (!ok)
              {
                descending = false;
                continue;
              }
            if (depth + 1 == pieces_.size())
              {
                if (leaf_ok(tuple))
                  {
                    if (nodes_out)
                      *nodes_out = nodes;
                    return true;
                  }
                descending = false;
                continue;
              }
            ++depth;
            descending = true;
          }
        if (nodes_out)
          *nodes_out = nodes;
        return false;
      }

    private:
      struct Piece
      {
        std::size_t member;
        std::vector<std::uint32_t> locals;
        std::size_t options;
      };

      const Coalition& c_;
      std::vector<state_id> states_;
      std::vector<std::vector<std::size_t>> radix_;
      std::vector<std::vector<std::vector<state_id>>> succ_;
      std::vector<std::vector<std::uint32_t>> piece_of_;
      std::vector<Piece> pieces_;
      std::vector<std::uint32_t> completes_at_;
      std::vector<std::vector<std::uint32_t>> completed_by_;
    };
  }

  // ---------------------------------------------------------------------
  // Reach

  /// \brief Reach(s_A, Q, target): states of Q from which every path under
  /// the assignment takes at least one step, reaches target, and stays in
  /// Q until it does.
  ///
  /// Choices missing from the assignment's domain leave the members free.
  inline StateSet reach(const Model& m, const UniformAssignment& u, const StateSet& Q,
                        const StateSet& target)
  {
    const std::size_t n = m.num_states();
    std::vector<std::vector<state_id>> succ(n);
    std::vector<action_id> choice(u.coalition.size());
    for (state_id q : Q)
      {
        for (std::size_t i = 0; i < choice.size(); ++i)
          choice[i] = u.domain.contains(q) ? u.choice[i][q] : no_action;
        for_each_restricted_successor(m, u.coalition, choice, q,
                                      [&](state_id t) { succ[q].push_back(t); });
      }
    StateSet r0(n);
    auto all_good = [&](state_id q) {
      return std::all_of(succ[q].begin(), succ[q].end(), [&](state_id t) {
        return t != no_state && (target.contains(t) || r0.contains(t));
      });
    };
    for (bool changed = true; changed;)
      {
        changed = false;
        for (state_id q : Q)
          if (!target.contains(q) && !r0.contains(q) && all_good(q))
            {
              r0.insert(q);
              changed = true;
            }
      }
    StateSet out(n);
    for (state_id q : Q)
      if (all_good(q))
        out.insert(q);
    return out;
  }

  // ---------------------------------------------------------------------
  // One-step operators on a single neighborhood

  namespace detail
  {
    /// ∃ uniform choices on `dom` sending every successor of every state
    /// of dom into target.
    inline bool can_enforce_next(const Model& m, const Coalition& c,
                                 const std::vector<state_id>& dom, const StateSet& target,
                                 std::size_t budget, std::size_t* nodes = nullptr)
    {
      LocalGame g(m, c, dom);
      auto local_ok = [&](std::size_t l, std::size_t t) {
        for (state_id s : g.successors(l, t))
          if (s == no_state || !target.contains(s))
            return false;
        return true;
      };
      return g.solve(local_ok, [](const std::vector<std::size_t>&) { return true; }, budget,
                     nodes);
    }

    /// ∃ uniform choices on `dom` with Reach(dom, target) = dom.
    inline bool can_enforce_steadfast(const Model& m, const Coalition& c,
                                      const std::vector<state_id>& dom, const StateSet& target,
                                      std::size_t budget, std::size_t* nodes = nullptr)
    {
      LocalGame g(m, c, dom);
      const std::size_t nl = g.size();
      std::unordered_map<state_id, std::size_t> local;
      for (std::size_t l = 0; l < nl; ++l)
        local.emplace(g.state(l), l);
      std::vector<char> in_target(nl);
      for (std::size_t l = 0; l < nl; ++l)
        in_target[l] = target.contains(g.state(l));

      // a step may stay inside dom or land in target, nothing else
      auto local_ok = [&](std::size_t l, std::size_t t) {
        for (state_id s : g.successors(l, t))
          if (s == no_state || (!target.contains(s) && !local.contains(s)))
            return false;
        return true;
      };
      std::vector<char> r0;
      auto leaf_ok = [&](const std::vector<std::size_t>& tuple) {
        r0.assign(nl, 0);
        auto good = [&](std::size_t l) {
          for (state_id s : g.successors(l, tuple[l]))
            if (!target.contains(s) && !r0[local.at(s)])
              return false;
          return true;
        };
        for (bool changed = true; changed;)
          {
            changed = false;
            for (std::size_t l = 0; l < nl; ++l)
              if (!in_target[l] && !r0[l] && good(l))
                r0[l] = 1, changed = true;
          }
        for (std::size_t l = 0; l < nl; ++l)
          if (!r0[l] && !good(l))
            return false;
        return true;
      };
      return g.solve(local_ok, leaf_ok, budget, nodes);
    }
  }

  /// ⟨A⟩target: states q with uniform choices on [q]_{~E^A} forcing every
  /// successor of that class into target.
  inline StateSet diamond(const Model& m, const Coalition& c, const StateSet& target,
                          std::size_t budget = default_assignment_budget)
  {
    StateSet out(m.num_states());
    std::map<std::vector<state_id>, bool> seen;
    for (state_id q = 0; q < m.num_states(); ++q)
      {
        auto dom = everybody_class(m, c, q).to_vector();
        auto [it, fresh] = seen.try_emplace(dom, false);
        if (fresh)
          it->second = detail::can_enforce_next(m, c, dom, target, budget);
        if (it->second)
          out.insert(q);
      }
    return out;
  }

  /// ⟨A⟩•target (C) or its everybody-knows variant (E).
  inline StateSet steadfast(const Model& m, const Coalition& c, const StateSet& target,
                            Neighborhood nb = Neighborhood::C,
                            std::size_t budget = default_assignment_budget)
  {
    StateSet out(m.num_states());
    if (nb == Neighborhood::C)
      {
        for (const auto& block : common_partition(m, c).blocks)
          if (detail::can_enforce_steadfast(m, c, block, target, budget))
            for (state_id q : block)
              out.insert(q);
        return out;
      }
    std::map<std::vector<state_id>, bool> seen;
    for (state_id q = 0; q < m.num_states(); ++q)
      {
        auto dom = everybody_class(m, c, q).to_vector();
        auto [it, fresh] = seen.try_emplace(dom, false);
        if (fresh)
          it->second = detail::can_enforce_steadfast(m, c, dom, target, budget);
        if (it->second)
          out.insert(q);
      }
    return out;
  }

  /// No transition joins two distinct states that `a` cannot tell apart,
  /// and self-loops occur only where a's block is a singleton.
  inline bool is_lockstep(const Model& m, agent_id a)
  {
    const Partition& p = m.epistemic(a);
    for (state_id q = 0; q < m.num_states(); ++q)
      {
        bool ok = true;
        m.for_each_successor(q, [&](state_id t) {
          if (t != no_state && p.block_of[t] == p.block_of[q] && (t != q || p.blocks[p.block_of[q]].size() > 1))
            ok = false;
        });
        if (!ok)
          return false;
      }
    return true;
  }

  // ---------------------------------------------------------------------
  // The evaluator

  struct EvalOptions
  {
    std::size_t assignment_budget = default_assignment_budget;
    bool memoize = true;
    /// Throw std::logic_error if a steadfast-C result is not a union of
    /// common-knowledge blocks.
    bool verify_block_constancy = false;
  };

  struct EvalStats
  {
    std::size_t fixpoint_runs = 0;
    std::size_t total_iterations = 0;
    std::size_t max_iterations = 0;
    std::size_t neighborhood_checks = 0;
    std::size_t memo_hits = 0;
    std::size_t search_nodes = 0;
  };

  /// \brief Evaluates formulas over one model.
  ///
  /// µ/ν run Kleene iteration from ∅/St until two successive iterates
  /// are equal.  Strategic operators with IR semantics use the
  /// controllable predecessor; ir operators go to the strategic hook
  /// (installed by the exact checker) and are rejected without one.
  class Evaluator
  {
  public:
    /// Receives the strategic node, its resolved coalition, the set for
    /// ψ (null for X, G and F) and the set for the goal φ.
    using StrategicHook = std::function<StateSet(const Node&, const Coalition&,
                                                 const StateSet*, const StateSet&)>;

    explicit Evaluator(const Model& m, EvalOptions opt = {}) : m_(m), opt_(opt) {}

    void set_strategic_hook(StrategicHook h) { hook_ = std::move(h); }

    const Model& model() const noexcept { return m_; }
    const EvalStats& stats() const noexcept { return stats_; }
    void reset_stats() { stats_ = {}; }

    /// ⟦g⟧ under `val`.
    StateSet eval(const Formula& g, const Valuation& val = {})
    {
      if (!check_alternation_free(g))
        throw FormulaError("formula is not alternation-free: " + to_string(g));
      if (!is_positive(g))
        throw FormulaError("fixpoint variable under an odd number of negations: " + to_string(g));
      for (const auto& z : free_variables(g))
        if (!val.contains(z))
          throw FormulaError("unbound variable '" + z + "'");
      env_.clear();
      for (const auto& [z, s] : val)
        {
          if (s.size() != m_.num_states())
            throw FormulaError("valuation of '" + z + "' has the wrong universe");
          env_[z].push_back(s);
        }
      return run(g);
    }

    bool holds(const Formula& g, state_id q, const Valuation& val = {})
    {
      return eval(g, val).contains(q);
    }

    Coalition coalition(const std::vector<std::string>& names) const
    {
      return m_.coalition(names);
    }

    StateSet know(agent_id a, const StateSet& t) const
    {
      return blockwise(m_.epistemic(a), t);
    }

    StateSet everybody(const Coalition& c, const StateSet& t) const
    {
      StateSet out = t;
      for (agent_id a : c)
        out &= blockwise(m_.epistemic(a), t);
      return out;
    }

    StateSet common(const Coalition& c, const StateSet& t) { return blockwise(common_of(c), t); }

    StateSet diamond(const Coalition& c, const StateSet& t)
    {
      StateSet out(m_.num_states());
      for (state_id q = 0; q < m_.num_states(); ++q)
        {
          auto dom = everybody_class(m_, c, q).to_vector();
          if (lookup(Kind::next, c, dom, t, [&](std::size_t* nodes) {
                return detail::can_enforce_next(m_, c, dom, t, opt_.assignment_budget, nodes);
              }))
            out.insert(q);
        }
      return out;
    }

    StateSet steadfast(const Coalition& c, const StateSet& t, Neighborhood nb)
    {
      StateSet out(m_.num_states());
      if (nb == Neighborhood::C)
        {
          for (const auto& block : common_of(c).blocks)
            if (lookup(Kind::steadfast, c, block, t, [&](std::size_t* nodes) {
                  return detail::can_enforce_steadfast(m_, c, block, t, opt_.assignment_budget,
                                                       nodes);
                }))
              for (state_id q : block)
                out.insert(q);
          if (opt_.verify_block_constancy)
            for (const auto& block : common_of(c).blocks)
              {
                const bool in = out.contains(block.front());
                for (state_id q : block)
                  if (out.contains(q) != in)
                    throw std::logic_error("steadfast result is not block-constant");
              }
          return out;
        }
      for (state_id q = 0; q < m_.num_states(); ++q)
        {
          auto dom = everybody_class(m_, c, q).to_vector();
          if (lookup(Kind::steadfast, c, dom, t, [&](std::size_t* nodes) {
                return detail::can_enforce_steadfast(m_, c, dom, t, opt_.assignment_budget,
                                                     nodes);
              }))
            out.insert(q);
        }
      return out;
    }

    /// Perfect-information strategic operator.
    StateSet strategic_IR(const Coalition& c, Temporal t, const StateSet* psi,
                          const StateSet& phi)
    {
      const std::size_t n = m_.num_states();
      switch (t)
        {
        case Temporal::next:
          return controllable_pre(m_, c, phi);
        case Temporal::always:
          return iterate(StateSet::full(n), [&](const StateSet& z) {
            return phi & controllable_pre(m_, c, z);
          });
        default:
          {
            const StateSet all = StateSet::full(n);
            const StateSet& stay = psi ? *psi : all;
            return iterate(StateSet(n), [&](const StateSet& z) {
              return phi | (stay & controllable_pre(m_, c, z));
            });
          }
        }
    }

  private:
    enum class Kind { next, steadfast };

    StateSet blockwise(const Partition& p, const StateSet& t) const
    {
      StateSet out(m_.num_states());
      for (const auto& block : p.blocks)
        if (std::all_of(block.begin(), block.end(), [&](state_id q) { return t.contains(q); }))
          for (state_id q : block)
            out.insert(q);
      return out;
    }

    const Partition& common_of(const Coalition& c)
    {
      auto it = common_.find(c);
      if (it == common_.end())
        it = common_.emplace(c, common_partition(m_, c)).first;
      return it->second;
    }

    // Memo key: kind, coalition, the domain, and target restricted to the
    // domain and its one-step successors.
    template <typename Compute>
    bool lookup(Kind kind, const Coalition& c, const std::vector<state_id>& dom,
                const StateSet& t, Compute&& compute)
    {
      ++stats_.neighborhood_checks;
      std::string key;
      if (opt_.memoize)
        {
          key.push_back(kind == Kind::next ? 'n' : 's');
          auto put = [&key](std::uint32_t v) {
            key.append(reinterpret_cast<const char*>(&v), sizeof v);
          };
          put(static_cast<std::uint32_t>(c.size()));
          for (agent_id a : c)
            put(a);
          put(static_cast<std::uint32_t>(dom.size()));
          std::vector<state_id> around;
          for (state_id q : dom)
            {
              put(q);
              m_.for_each_successor(q, [&](state_id s) { around.push_back(s); });
            }
          around.insert(around.end(), dom.begin(), dom.end());
          std::sort(around.begin(), around.end());
          around.erase(std::unique(around.begin(), around.end()), around.end());
          std::uint32_t bits = 0, nbits = 0;
          for (state_id s : around)
            {
              if (s != no_state && t.contains(s))
                bits |= 1u << nbits;
              if (++nbits == 32)
                {
                  put(bits);
                  bits = nbits = 0;
                }
            }
          put(bits);
          if (auto it = memo_.find(key); it != memo_.end())
            {
              ++stats_.memo_hits;
              return it->second;
            }
        }
      std::size_t nodes = 0;
      bool r;
      try
        {
          r = compute(&nodes);
        }
      catch (...)
        {
          stats_.search_nodes += nodes;
          throw;
        }
      stats_.search_nodes += nodes;
      if (opt_.memoize)
        memo_.emplace(std::move(key), r);
      return r;
    }

    template <typename Body>
    StateSet iterate(StateSet x, Body&& body)
    {
      std::size_t iterations = 0;
      for (;;)
        {
          ++iterations;
          StateSet y = body(x);
          if (y == x)
            break;
          x = std::move(y);
        }
      ++stats_.fixpoint_runs;
      stats_.total_iterations += iterations;
      stats_.max_iterations = std::max(stats_.max_iterations, iterations);
      return x;
    }

    bool closed(const Formula& g)
    {
      auto it = closed_.find(g.get());
      if (it == closed_.end())
        it = closed_.emplace(g.get(), std::make_pair(g, is_closed(g))).first;
      return it->second.second;
    }

    StateSet run(const Formula& g)
    {
      const bool cacheable = closed(g);
      if (cacheable)
        if (auto it = cache_.find(g.get()); it != cache_.end())
          return it->second.second;
      StateSet r = compute(g);
      if (cacheable)
        cache_.emplace(g.get(), std::make_pair(g, r));
      return r;
    }

    StateSet compute(const Formula& g)
    {
      const std::size_t n = m_.num_states();
      switch (g->op)
        {
        case Op::constant:
          return StateSet(n, g->value);
        case Op::atom:
          if (!m_.has_atom(g->name))
            return StateSet(n);
          return m_.label(g->name);
        case Op::var:
          {
            auto it = env_.find(g->name);
            if (it == env_.end() || it->second.empty())
              throw FormulaError("unbound variable '" + g->name + "'");
            return it->second.back();
          }
        case Op::not_:
          return ~run(g->lhs);
        case Op::and_:
          return run(g->lhs) & run(g->rhs);
        case Op::or_:
          return run(g->lhs) | run(g->rhs);
        case Op::implies:
          return ~run(g->lhs) | run(g->rhs);
        case Op::know:
          return know(m_.agent(g->agents.front()), run(g->lhs));
        case Op::everybody:
          return everybody(coalition(g->agents), run(g->lhs));
        case Op::common:
          return common(coalition(g->agents), run(g->lhs));
        case Op::diamond:
          {
            auto c = coalition(g->agents);
            return diamond(c, run(g->lhs));
          }
        case Op::steadfast:
          {
            auto c = coalition(g->agents);
            return steadfast(c, run(g->lhs), g->neighborhood);
          }
        case Op::mu:
        case Op::nu:
          {
            auto& slot = env_[g->name];
            slot.push_back(StateSet(n, g->op == Op::nu));
            StateSet r;
            try
              {
                r = iterate(slot.back(), [&](const StateSet& z) {
                  env_[g->name].back() = z;
                  return run(g->lhs);
                });
              }
            catch (...)
              {
                env_[g->name].pop_back();
                throw;
              }
            env_[g->name].pop_back();
            return r;
          }
        case Op::strategic:
          {
            auto c = coalition(g->agents);
            std::optional<StateSet> psi;
            StateSet phi;
            if (g->temporal == Temporal::until)
              {
                psi = run(g->lhs);
                phi = run(g->rhs);
              }
            else
              phi = run(g->lhs);
            if (g->semantics == Semantics::IR)
              return strategic_IR(c, g->temporal, psi ? &*psi : nullptr, phi);
            if (!hook_)
              throw FormulaError("ir strategic operator needs the exact checker: " + to_string(g));
            return hook_(*g, c, psi ? &*psi : nullptr, phi);
          }
        }
      throw FormulaError("unhandled formula node");
    }

    const Model& m_;
    EvalOptions opt_;
    EvalStats stats_;
    StrategicHook hook_;
    std::map<std::string, std::vector<StateSet>> env_;
    std::map<Coalition, Partition> common_;
    std::unordered_map<std::string, bool> memo_;
    // the maps hold the formula alive so the pointer keys stay valid
    std::unordered_map<const Node*, std::pair<Formula, bool>> closed_;
    std::unordered_map<const Node*, std::pair<Formula, StateSet>> cache_;
  };

  /// ⟦g⟧ with a fresh evaluator.
  inline StateSet eval(const Model& m, const Formula& g, const Valuation& val = {},
                       EvalOptions opt = {})
  {
    return Evaluator(m, opt).eval(g, val);
  }
}
