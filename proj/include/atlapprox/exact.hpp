#pragma once

// Exact model checking: ATL_ir by strategy search, ATL_Ir by the
// controllable predecessor, and the three-valued verdict built from the
// tr/TR approximations.

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "errors.hpp"
#include "fixpoint.hpp"
#include "formula.hpp"
#include "icgs.hpp"
#include "translate.hpp"

namespace atlapprox
{
  inline constexpr std::size_t default_strategy_budget = 10'000'000;

  struct ExactOptions
  {
    /// Search nodes allowed per strategic subformula.
    std::size_t budget = default_strategy_budget;
    /// Success required from all of [q]_{~E^A} (subjective) or from q alone.
    bool subjective = true;
  };

  namespace detail
  {
    /// \brief Looks for one uniform memoryless strategy of `c` that wins
    /// the goal from every state of `start`.
    ///
    /// Choices are fixed lazily, one epistemic block at a time, as the
    /// outcome paths first reach a block; states the strategy never
    /// reaches stay unconstrained.
    class StrategySearch
    {
    public:
      StrategySearch(const Model& m, const Coalition& c, Temporal t, const StateSet* psi,
                     const StateSet& phi, std::size_t budget, std::size_t& nodes)
        : m_(m), c_(c), t_(t), psi_(psi), phi_(phi), budget_(budget), nodes_(nodes)
      {
        for (agent_id a : c)
          assigned_.emplace_back(m.epistemic(a).size(), no_choice);
        seen_.assign(m.num_states(), 0);
      }

      bool winning_from(const std::vector<state_id>& start)
      {
        reached_.clear();
        std::fill(seen_.begin(), seen_.end(), 0);
        for (auto& row : assigned_)
          std::fill(row.begin(), row.end(), no_choice);
        for (state_id q : start)
          mark(q);
        return explore(0);
      }

    private:
      static constexpr std::uint32_t no_choice = std::numeric_limits<std::uint32_t>::max();

      void mark(state_id q)
      {
        if (!seen_[q])
          {
            seen_[q] = 1;
            reached_.push_back(q);
          }
      }

      bool in_psi(state_id q) const { return !psi_ || psi_->contains(q); }

      // paths from q are already decided without looking further
      bool terminal(state_id q) const { return t_ == Temporal::until || t_ == Temporal::eventually
                                                 ? phi_.contains(q) : false; }

      bool explore(std::size_t i)
      {
        if (i == reached_.size())
          return t_ == Temporal::always || t_ == Temporal::next || acyclic();
        const state_id q = reached_[i];
        switch (t_)
          {
          case Temporal::always:
            if (!phi_.contains(q))
              return false;
            break;
          case Temporal::until:
          case Temporal::eventually:
            if (phi_.contains(q))
              return explore(i + 1);
            if (!in_psi(q))
              return false;
            break;
          case Temporal::next:
            break;
          }
        return choose(i, q, 0);
      }

      // fix the choice of member k at q's block, then expand q
      bool choose(std::size_t i, state_id q, std::size_t k)
      {
        if (k == c_.size())
          return expand(i, q);
        const agent_id a = c_.members()[k];
        const auto block = m_.epistemic(a).block_of[q];
        std::uint32_t& slot = assigned_[k][block];
        if (slot != no_choice)
          return choose(i, q, k + 1);
        const std::size_t options = m_.protocol(a, q).size();
        for (std::uint32_t o = 0; o < options; ++o)
          {
            if (++nodes_ > budget_)
              throw BudgetExceeded("strategies of a coalition of " + std::to_string(c_.size()),
                                   strategy_count(), budget_);
            slot = o;
            if (choose(i, q, k + 1))
              return true;
          }
        slot = no_choice;
        return false;
      }

      bool expand(std::size_t i, state_id q)
      {
        const std::size_t mark_point = reached_.size();
        bool ok = true;
        for_each_succ(q, [&](state_id s) {
          if (s == no_state)
            ok = false;
          else if (t_ == Temporal::next)
            ok = ok && phi_.contains(s);
          else
            mark(s);
        });
        const bool r = ok && explore(i + 1);
        for (std::size_t j = mark_point; j < reached_.size(); ++j)
          seen_[reached_[j]] = 0;
        reached_.resize(mark_point);
        return r;
      }

      template <typename Fn>
      void for_each_succ(state_id q, Fn&& fn) const
      {
        for (std::size_t j = 0; j < m_.joint_count(q); ++j)
          {
            bool consistent = true;
            for (std::size_t k = 0; k < c_.size() && consistent; ++k)
              {
                const agent_id a = c_.members()[k];
                consistent = m_.choice_of(q, j, a) == assigned_[k][m_.epistemic(a).block_of[q]];
              }
            if (consistent)
              fn(m_.successor(q, j));
          }
      }

      // no outcome path stays forever among reached non-goal states
      bool acyclic() const
      {
        std::vector<char> colour(m_.num_states(), 0);  // 0 new, 1 open, 2 done
        for (state_id root : reached_)
          {
            if (terminal(root) || colour[root])
              continue;
            std::vector<std::pair<state_id, std::vector<state_id>>> stack;
            auto push = [&](state_id q) {
              colour[q] = 1;
              std::vector<state_id> next;
              for_each_succ(q, [&](state_id s) { if (!terminal(s)) next.push_back(s); });
              stack.emplace_back(q, std::move(next));
            };
            push(root);
            while (!stack.empty())
              {
                auto& [q, next] = stack.back();
                if (next.empty())
                  {
                    colour[q] = 2;
                    stack.pop_back();
                    continue;
                  }
                const state_id s = next.back();
                next.pop_back();
                if (colour[s] == 1)
                  return false;
                if (colour[s] == 0)
                  push(s);
              }
          }
        return true;
      }

      double strategy_count() const
      {
        double n = 1;
        for (agent_id a : c_)
          for (const auto& block : m_.epistemic(a).blocks)
            n *= static_cast<double>(m_.protocol(a, block.front()).size());
        return n;
      }

      const Model& m_;
      const Coalition& c_;
      Temporal t_;
      const StateSet* psi_;
      const StateSet& phi_;
      std::size_t budget_;
      std::size_t& nodes_;
      std::vector<std::vector<std::uint32_t>> assigned_;  // [member][block]
      std::vector<state_id> reached_;
      std::vector<char> seen_;
    };
  }

  /// States where ⟨⟨c⟩⟩_ir goal holds, the goal's operands given as sets.
  inline StateSet strategic_ir(const Model& m, const Coalition& c, Temporal t,
                               const StateSet* psi, const StateSet& phi,
                               const ExactOptions& opt = {}, std::size_t* nodes_out = nullptr)
  {
    StateSet out(m.num_states());
    std::size_t nodes = 0;
    detail::StrategySearch search(m, c, t, psi, phi, opt.budget, nodes);
    std::map<std::vector<state_id>, bool> memo;
    for (state_id q = 0; q < m.num_states(); ++q)
      {
        std::vector<state_id> start = opt.subjective ? everybody_class(m, c, q).to_vector()
                                                     : std::vector<state_id>{q};
        auto [it, fresh] = memo.try_emplace(start, false);
        if (fresh)
          it->second = search.winning_from(start);
        if (it->second)
          out.insert(q);
      }
    if (nodes_out)
      *nodes_out += nodes;
    return out;
  }

  /// Exact ATL_ir: nested operators bottom-up, each strategic operator by
  /// strategy search.  IR operators, if present, use their own semantics.
  inline StateSet check_ir(const Model& m, const Formula& g, const ExactOptions& opt = {})
  {
    if (!is_atl(g))
      throw FormulaError("check_ir takes ATL formulas: " + to_string(g));
    Evaluator ev(m);
    ev.set_strategic_hook([&](const Node& n, const Coalition& c, const StateSet* psi,
                              const StateSet& phi) {
      return strategic_ir(m, c, n.temporal, psi, phi, opt);
    });
    return ev.eval(g);
  }

  /// Exact ATL_Ir (perfect information, memoryless) by fixpoints over the
  /// controllable predecessor.  Knowledge operators keep their meaning.
  inline StateSet check_IR(const Model& m, const Formula& g)
  {
    if (contains_node(g, [](const Node& n) {
          return n.op == Op::strategic && n.semantics == Semantics::ir;
        }))
      throw FormulaError("check_IR takes IR strategic operators only: " + to_string(g));
    return Evaluator(m).eval(g);
  }

  // ---------------------------------------------------------------------
  // Verdict

  enum class Truth { True, False, Unknown };

  inline const char* to_string(Truth t)
  {
    switch (t)
      {
      case Truth::True: return "True";
      case Truth::False: return "False";
      default: return "Unknown";
      }
  }

  struct Verdict
  {
    Truth value = Truth::Unknown;
    bool lower = false;
    bool upper = false;
    std::size_t lower_iterations = 0;
    std::size_t upper_iterations = 0;
    double lower_seconds = 0;
    double upper_seconds = 0;
  };

  struct VerdictOptions
  {
    EvalOptions eval;
  };

  namespace detail
  {
    template <typename Fn>
    double timed(Fn&& fn)
    {
      auto t0 = std::chrono::steady_clock::now();
      fn();
      return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
  }

  /// Verdict from precomputed bound values.
  inline Truth combine(bool lower, bool upper)
  {
    if (lower)
      return Truth::True;
    if (!upper)
      return Truth::False;
    return Truth::Unknown;
  }

  /// Evaluates tr(φ) and TR(φ) at q.
  inline Verdict verdict(const Model& m, state_id q, const Formula& g,
                         const VerdictOptions& opt = {})
  {
    if (q >= m.num_states())
      throw ModelError("verdict: unknown state");
    Verdict v;
    const Formula lo = tr(g), up = TR(g);
    v.lower_seconds = detail::timed([&] {
      Evaluator ev(m, opt.eval);
      v.lower = ev.eval(lo).contains(q);
      v.lower_iterations = ev.stats().total_iterations;
    });
    v.upper_seconds = detail::timed([&] {
      Evaluator ev(m, opt.eval);
      v.upper = ev.eval(up).contains(q);
      v.upper_iterations = ev.stats().total_iterations;
    });
    v.value = combine(v.lower, v.upper);
    return v;
  }
}
