#pragma once

// Formula AST shared by ATL_ir/ATL_Ir and the alternating epistemic
// mu-calculus, with structural utilities and well-formedness checks.

#include <algorithm>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace atlapprox
{
  enum class Op
  {
    constant,
    atom,
    var,
    not_,
    and_,
    or_,
    implies,
    strategic,  // <<A>>_x temporal
    know,       // K a
    everybody,  // E {A}
    common,     // C {A}
    mu,
    nu,
    diamond,    // <A>
    steadfast,  // <A>* (C) or <A>~ (E)
  };

  enum class Temporal { next, always, until, eventually };
  enum class Semantics { ir, IR };
  enum class Neighborhood { E, C };

  struct Node;
  using Formula = std::shared_ptr<const Node>;

  /// \brief One formula node.  Immutable and shared between trees.
  ///
  /// `agents` holds the coalition (or the single agent of K) by name;
  /// names are resolved against a model only at evaluation time.
  /// `name` is the atom, variable or binder variable.  Unary operands and
  /// the goal of X/G/F live in `lhs`; U stores ψ in `lhs` and φ in `rhs`.
  struct Node
  {
    Op op;
    bool value = false;
    std::string name = {};
    std::vector<std::string> agents = {};
    Temporal temporal = Temporal::next;
    Semantics semantics = Semantics::ir;
    Neighborhood neighborhood = Neighborhood::C;
    Formula lhs = {}, rhs = {};
  };

  namespace detail
  {
    inline std::vector<std::string> normalize_agents(std::vector<std::string> a)
    {
      std::sort(a.begin(), a.end());
      a.erase(std::unique(a.begin(), a.end()), a.end());
      return a;
    }

    inline Formula make(Node n) { return std::make_shared<const Node>(std::move(n)); }
  }

  namespace f
  {
    inline Formula top() { return detail::make({Op::constant, true}); }
    inline Formula bottom() { return detail::make({Op::constant, false}); }
    inline Formula atom(std::string p) { return detail::make({.op = Op::atom, .name = std::move(p)}); }
    inline Formula var(std::string z) { return detail::make({.op = Op::var, .name = std::move(z)}); }
    inline Formula not_(Formula a) { return detail::make({.op = Op::not_, .lhs = std::move(a)}); }
    inline Formula and_(Formula a, Formula b)
    {
      return detail::make({.op = Op::and_, .lhs = std::move(a), .rhs = std::move(b)});
    }
    inline Formula or_(Formula a, Formula b)
    {
      return detail::make({.op = Op::or_, .lhs = std::move(a), .rhs = std::move(b)});
    }
    inline Formula implies(Formula a, Formula b)
    {
      return detail::make({.op = Op::implies, .lhs = std::move(a), .rhs = std::move(b)});
    }

    inline Formula strategic(std::vector<std::string> c, Temporal t, Formula goal,
                             Semantics s = Semantics::ir)
    {
      if (t == Temporal::until)
        throw FormulaError("until needs two operands");
      return detail::make({.op = Op::strategic, .agents = detail::normalize_agents(std::move(c)),
                           .temporal = t, .semantics = s, .lhs = std::move(goal)});
    }
    inline Formula next(std::vector<std::string> c, Formula g, Semantics s = Semantics::ir)
    {
      return strategic(std::move(c), Temporal::next, std::move(g), s);
    }
    inline Formula always(std::vector<std::string> c, Formula g, Semantics s = Semantics::ir)
    {
      return strategic(std::move(c), Temporal::always, std::move(g), s);
    }
    inline Formula eventually(std::vector<std::string> c, Formula g, Semantics s = Semantics::ir)
    {
      return strategic(std::move(c), Temporal::eventually, std::move(g), s);
    }
    inline Formula until(std::vector<std::string> c, Formula psi, Formula phi,
                         Semantics s = Semantics::ir)
    {
      return detail::make({.op = Op::strategic, .agents = detail::normalize_agents(std::move(c)),
                           .temporal = Temporal::until, .semantics = s,
                           .lhs = std::move(psi), .rhs = std::move(phi)});
    }

    inline Formula know(std::string a, Formula g)
    {
      return detail::make({.op = Op::know, .agents = {std::move(a)}, .lhs = std::move(g)});
    }
    inline Formula everybody(std::vector<std::string> c, Formula g)
    {
      return detail::make({.op = Op::everybody, .agents = detail::normalize_agents(std::move(c)),
                           .lhs = std::move(g)});
    }
    inline Formula common(std::vector<std::string> c, Formula g)
    {
      return detail::make({.op = Op::common, .agents = detail::normalize_agents(std::move(c)),
                           .lhs = std::move(g)});
    }
    inline Formula mu(std::string z, Formula body)
    {
      return detail::make({.op = Op::mu, .name = std::move(z), .lhs = std::move(body)});
    }
    inline Formula nu(std::string z, Formula body)
    {
      return detail::make({.op = Op::nu, .name = std::move(z), .lhs = std::move(body)});
    }
    inline Formula diamond(std::vector<std::string> c, Formula g)
    {
      return detail::make({.op = Op::diamond, .agents = detail::normalize_agents(std::move(c)),
                           .lhs = std::move(g)});
    }
    inline Formula steadfast(std::vector<std::string> c, Formula g,
                             Neighborhood n = Neighborhood::C)
    {
      return detail::make({.op = Op::steadfast, .agents = detail::normalize_agents(std::move(c)),
                           .neighborhood = n, .lhs = std::move(g)});
    }
  }

  inline bool is_binary(Op op) { return op == Op::and_ || op == Op::or_ || op == Op::implies; }
  inline bool is_binder(Op op) { return op == Op::mu || op == Op::nu; }

  /// Structural equality (binder variable names must match too).
  inline bool equal(const Formula& a, const Formula& b)
  {
    if (a == b)
      return true;
    if (!a || !b)
      return false;
    if (a->op != b->op || a->value != b->value || a->name != b->name || a->agents != b->agents)
      return false;
    if (a->op == Op::strategic
        && (a->temporal != b->temporal || a->semantics != b->semantics))
      return false;
    if (a->op == Op::steadfast && a->neighborhood != b->neighborhood)
      return false;
    return equal(a->lhs, b->lhs) && equal(a->rhs, b->rhs);
  }

  namespace detail
  {
    using Renaming = std::vector<std::pair<std::string, std::string>>;

    inline bool alpha(const Formula& a, const Formula& b, Renaming& env)
    {
      if (!a || !b)
        return !a && !b;
      if (a->op != b->op || a->value != b->value || a->agents != b->agents)
        return false;
      if (a->op == Op::strategic
          && (a->temporal != b->temporal || a->semantics != b->semantics))
        return false;
      if (a->op == Op::steadfast && a->neighborhood != b->neighborhood)
        return false;
      if (a->op == Op::var)
        {
          for (auto it = env.rbegin(); it != env.rend(); ++it)
            {
              if (it->first == a->name || it->second == b->name)
                return it->first == a->name && it->second == b->name;
            }
          return a->name == b->name;
        }
      if (a->op == Op::atom && a->name != b->name)
        return false;
      if (is_binder(a->op))
        {
          env.emplace_back(a->name, b->name);
          bool r = alpha(a->lhs, b->lhs, env);
          env.pop_back();
          return r;
        }
      return alpha(a->lhs, b->lhs, env) && alpha(a->rhs, b->rhs, env);
    }
  }

  /// Equality up to consistent renaming of bound variables.
  inline bool alpha_equivalent(const Formula& a, const Formula& b)
  {
    detail::Renaming env;
    return detail::alpha(a, b, env);
  }

  namespace detail
  {
    inline void free_vars(const Formula& g, std::vector<std::string>& bound,
                          std::set<std::string>& out)
    {
      if (!g)
        return;
      if (g->op == Op::var)
        {
          if (std::find(bound.begin(), bound.end(), g->name) == bound.end())
            out.insert(g->name);
          return;
        }
      if (is_binder(g->op))
        {
          bound.push_back(g->name);
          free_vars(g->lhs, bound, out);
          bound.pop_back();
          return;
        }
      free_vars(g->lhs, bound, out);
      free_vars(g->rhs, bound, out);
    }
  }

  inline std::set<std::string> free_variables(const Formula& g)
  {
    std::vector<std::string> bound;
    std::set<std::string> out;
    detail::free_vars(g, bound, out);
    return out;
  }

  inline bool is_closed(const Formula& g) { return free_variables(g).empty(); }

  /// Every atom name occurring in g.
  inline std::set<std::string> atoms(const Formula& g)
  {
    std::set<std::string> out;
    auto walk = [&](auto&& self, const Formula& h) -> void {
      if (!h)
        return;
      if (h->op == Op::atom)
        out.insert(h->name);
      self(self, h->lhs);
      self(self, h->rhs);
    };
    walk(walk, g);
    return out;
  }

  /// True if some node satisfies pred.
  template <typename Pred>
  bool contains_node(const Formula& g, Pred&& pred)
  {
    if (!g)
      return false;
    return pred(*g) || contains_node(g->lhs, pred) || contains_node(g->rhs, pred);
  }

  namespace detail
  {
    // Walks g with the negation parity of the current position.  An
    // implication's antecedent sits under one implicit negation.
    template <typename Fn>
    void walk_polarity(const Formula& g, bool negated, Fn&& fn)
    {
      if (!g)
        return;
      fn(*g, negated);
      switch (g->op)
        {
        case Op::not_:
          walk_polarity(g->lhs, !negated, fn);
          return;
        case Op::implies:
          walk_polarity(g->lhs, !negated, fn);
          walk_polarity(g->rhs, negated, fn);
          return;
        default:
          walk_polarity(g->lhs, negated, fn);
          walk_polarity(g->rhs, negated, fn);
        }
    }

    inline bool positive_in(const Formula& g, const std::string& z, bool negated)
    {
      if (!g)
        return true;
      switch (g->op)
        {
        case Op::var:
          return g->name != z || !negated;
        case Op::not_:
          return positive_in(g->lhs, z, !negated);
        case Op::implies:
          return positive_in(g->lhs, z, !negated) && positive_in(g->rhs, z, negated);
        case Op::mu:
        case Op::nu:
          return g->name == z || positive_in(g->lhs, z, negated);
        default:
          return positive_in(g->lhs, z, negated) && positive_in(g->rhs, z, negated);
        }
    }
  }

  /// Every µZ/νZ has its free occurrences of Z under an even number of
  /// negations.
  inline bool is_positive(const Formula& g)
  {
    bool ok = true;
    detail::walk_polarity(g, false, [&](const Node& n, bool) {
      if (is_binder(n.op) && !detail::positive_in(n.lhs, n.name, false))
        ok = false;
    });
    return ok;
  }

  namespace detail
  {
    struct Binder
    {
      std::string name;
      bool least;  // effective kind after pushing negations inward
    };

    inline bool alternation_free(const Formula& g, bool negated, std::vector<Binder>& scope)
    {
      if (!g)
        return true;
      switch (g->op)
        {
        case Op::var:
          {
            for (std::size_t i = scope.size(); i-- > 0;)
              if (scope[i].name == g->name)
                {
                  for (std::size_t j = i + 1; j < scope.size(); ++j)
                    if (scope[j].least != scope[i].least)
                      return false;
                  return true;
                }
            return true;
          }
        case Op::not_:
          return alternation_free(g->lhs, !negated, scope);
        case Op::implies:
          return alternation_free(g->lhs, !negated, scope)
            && alternation_free(g->rhs, negated, scope);
        case Op::mu:
        case Op::nu:
          {
            scope.push_back({g->name, (g->op == Op::mu) != negated});
            bool r = alternation_free(g->lhs, negated, scope);
            scope.pop_back();
            return r;
          }
        default:
          return alternation_free(g->lhs, negated, scope)
            && alternation_free(g->rhs, negated, scope);
        }
    }
  }

  /// In negation normal form, no path from µZ (νZ) to a bound occurrence
  /// of Z passes through a ν (µ).
  inline bool check_alternation_free(const Formula& g)
  {
    std::vector<detail::Binder> scope;
    return detail::alternation_free(g, false, scope);
  }

  /// Strategic operators only, with no fixpoint or next-step modality.
  inline bool is_atl(const Formula& g)
  {
    return !contains_node(g, [](const Node& n) {
      return n.op == Op::var || is_binder(n.op) || n.op == Op::diamond
        || n.op == Op::steadfast;
    });
  }

  inline bool is_atl_ir(const Formula& g)
  {
    return is_atl(g) && !contains_node(g, [](const Node& n) {
      return n.op == Op::strategic && n.semantics == Semantics::IR;
    });
  }

  // ---------------------------------------------------------------------
  // Printing

  namespace detail
  {
    inline std::string agent_list(const std::vector<std::string>& a)
    {
      std::string s;
      for (std::size_t i = 0; i < a.size(); ++i)
        {
          if (i)
            s += ',';
          s += a[i];
        }
      return s;
    }

    inline void print(const Formula& g, std::string& out)
    {
      switch (g->op)
        {
        case Op::constant:
          out += g->value ? "true" : "false";
          return;
        case Op::atom:
        case Op::var:
          out += g->name;
          return;
        case Op::not_:
          out += '!';
          print(g->lhs, out);
          return;
        case Op::and_:
        case Op::or_:
        case Op::implies:
          out += '(';
          print(g->lhs, out);
          out += g->op == Op::and_ ? " & " : g->op == Op::or_ ? " | " : " -> ";
          print(g->rhs, out);
          out += ')';
          return;
        case Op::strategic:
          out += "<<" + agent_list(g->agents) + ">>";
          if (g->semantics == Semantics::IR)
            out += "_IR";
          out += ' ';
          switch (g->temporal)
            {
            case Temporal::next: out += "X "; break;
            case Temporal::always: out += "G "; break;
            case Temporal::eventually: out += "F "; break;
            case Temporal::until:
              out += '(';
              print(g->lhs, out);
              out += " U ";
              print(g->rhs, out);
              out += ')';
              return;
            }
          print(g->lhs, out);
          return;
        case Op::know:
          out += "K " + g->agents.front() + ' ';
          print(g->lhs, out);
          return;
        case Op::everybody:
        case Op::common:
          out += g->op == Op::everybody ? "E {" : "C {";
          out += agent_list(g->agents) + "} ";
          print(g->lhs, out);
          return;
        case Op::mu:
        case Op::nu:
          out += g->op == Op::mu ? "mu " : "nu ";
          out += g->name + " . ";
          print(g->lhs, out);
          return;
        case Op::diamond:
          out += '<' + agent_list(g->agents) + "> ";
          print(g->lhs, out);
          return;
        case Op::steadfast:
          out += '<' + agent_list(g->agents) + '>';
          out += g->neighborhood == Neighborhood::C ? "* " : "~ ";
          print(g->lhs, out);
          return;
        }
    }
  }

  /// Canonical concrete syntax; parse(to_string(g)) is structurally equal to g.
  inline std::string to_string(const Formula& g)
  {
    std::string out;
    detail::print(g, out);
    return out;
  }
}
