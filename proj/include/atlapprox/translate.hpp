#pragma once

// Fixpoint translations of ATL_ir goals: the reachability-only
// tr1/tr2/tr3, and the lower/upper approximations tr and TR.

#include <set>
#include <string>
#include <vector>

#include "errors.hpp"
#include "formula.hpp"

namespace atlapprox
{
  namespace detail
  {
    /// Hands out Z0, Z1, ... skipping names already used in the input.
    class FreshVars
    {
    public:
      explicit FreshVars(const Formula& input)
      {
        contains_node(input, [&](const Node& n) {
          if (!n.name.empty())
            taken_.insert(n.name);
          return false;
        });
      }

      std::string next()
      {
        for (;;)
          {
            std::string z = "Z" + std::to_string(counter_++);
            if (!taken_.contains(z))
              return z;
          }
      }

    private:
      std::set<std::string> taken_;
      unsigned counter_ = 0;
    };

    // E_A for the reachability translations: K_a for one agent.
    inline Formula knows_all(const std::vector<std::string>& c, Formula g)
    {
      if (c.size() == 1)
        return f::know(c.front(), std::move(g));
      return f::everybody(c, std::move(g));
    }
  }

  /// µZ.(goal ∨ ⟨A⟩Z)
  inline Formula tr1(const std::vector<std::string>& coalition, const Formula& goal)
  {
    const std::string z = detail::FreshVars(goal).next();
    return f::mu(z, f::or_(goal, f::diamond(coalition, f::var(z))));
  }

  /// µZ.(E_A goal ∨ ⟨A⟩Z)
  inline Formula tr2(const std::vector<std::string>& coalition, const Formula& goal)
  {
    const std::string z = detail::FreshVars(goal).next();
    return f::mu(z, f::or_(detail::knows_all(coalition, goal),
                           f::diamond(coalition, f::var(z))));
  }

  /// µZ.(E_A goal ∨ ⟨A⟩•Z)
  inline Formula tr3(const std::vector<std::string>& coalition, const Formula& goal)
  {
    const std::string z = detail::FreshVars(goal).next();
    return f::mu(z, f::or_(detail::knows_all(coalition, goal),
                           f::steadfast(coalition, f::var(z), Neighborhood::C)));
  }

  namespace detail
  {
    inline Formula approx(const Formula& g, bool lower, FreshVars& fresh)
    {
      switch (g->op)
        {
        case Op::constant:
        case Op::atom:
          return g;
        case Op::not_:
          return f::not_(approx(g->lhs, !lower, fresh));
        case Op::and_:
          return f::and_(approx(g->lhs, lower, fresh), approx(g->rhs, lower, fresh));
        case Op::or_:
          return f::or_(approx(g->lhs, lower, fresh), approx(g->rhs, lower, fresh));
        case Op::implies:
          return f::implies(approx(g->lhs, !lower, fresh), approx(g->rhs, lower, fresh));
        case Op::know:
          return f::know(g->agents.front(), approx(g->lhs, lower, fresh));
        case Op::everybody:
          return f::everybody(g->agents, approx(g->lhs, lower, fresh));
        case Op::common:
          return f::common(g->agents, approx(g->lhs, lower, fresh));
        case Op::strategic:
          break;
        default:
          throw FormulaError("not an ATL_ir formula: " + to_string(g));
        }
      if (g->semantics != Semantics::ir)
        throw FormulaError("tr/TR take ir strategic operators only: " + to_string(g));

      const auto& a = g->agents;
      Formula psi, phi;  // goal as psi U phi, or phi alone for X and G
      switch (g->temporal)
        {
        case Temporal::next:
        case Temporal::always:
          phi = approx(g->lhs, lower, fresh);
          break;
        case Temporal::eventually:
          psi = f::top();
          phi = approx(g->lhs, lower, fresh);
          break;
        case Temporal::until:
          psi = approx(g->lhs, lower, fresh);
          phi = approx(g->rhs, lower, fresh);
          break;
        }

      if (!lower)
        {
          Formula inner;
          switch (g->temporal)
            {
            case Temporal::next: inner = f::next(a, phi, Semantics::IR); break;
            case Temporal::always: inner = f::always(a, phi, Semantics::IR); break;
            default: inner = f::until(a, psi, phi, Semantics::IR); break;
            }
          return f::everybody(a, inner);
        }

      switch (g->temporal)
        {
        case Temporal::next:
          return f::diamond(a, phi);
        case Temporal::always:
          {
            const std::string z = fresh.next();
            return f::nu(z, f::and_(f::common(a, phi), f::steadfast(a, f::var(z))));
          }
        default:
          {
            const std::string z = fresh.next();
            return f::mu(z, f::or_(f::everybody(a, phi),
                                   f::and_(f::common(a, psi), f::steadfast(a, f::var(z)))));
          }
        }
    }

    inline void require_atl_ir(const Formula& g)
    {
      if (!is_atl_ir(g))
        throw FormulaError("tr/TR take ATL_ir formulas (no fixpoints, variables, next-step "
                           "modalities or IR operators): " + to_string(g));
    }
  }

  /// Lower approximation: M,q ⊨ tr(φ) implies M,q ⊨ φ.
  inline Formula tr(const Formula& g)
  {
    detail::require_atl_ir(g);
    detail::FreshVars fresh(g);
    return detail::approx(g, true, fresh);
  }

  /// Upper approximation: M,q ⊨ φ implies M,q ⊨ TR(φ).
  inline Formula TR(const Formula& g)
  {
    detail::require_atl_ir(g);
    detail::FreshVars fresh(g);
    return detail::approx(g, false, fresh);
  }

  /// Splits a flat reachability formula <<A>> F goal; null goal otherwise.
  struct ReachabilityGoal
  {
    std::vector<std::string> coalition;
    Formula goal;
  };

  inline ReachabilityGoal as_reachability(const Formula& g)
  {
    if (g && g->op == Op::strategic && g->semantics == Semantics::ir)
      {
        if (g->temporal == Temporal::eventually)
          return {g->agents, g->lhs};
        if (g->temporal == Temporal::until && g->lhs->op == Op::constant && g->lhs->value)
          return {g->agents, g->rhs};
      }
    return {};
  }
}
