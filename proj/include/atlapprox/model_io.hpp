#pragma once

// Plain-text model files.
//
//   # comment
//   agents: 1 2
//   states:
//     q0 label: p q    state with its atoms ("q0: p q" also works)
//     q1
//   actions: a b x y   optional; actions are also declared by use
//   protocol:
//     1 q0: a b        agent, state, allowed actions
//   transitions:
//     q0 (a, x) -> q1  one action per agent, in agent order
//   epistemic:
//     1: {q0 q1} {q2 q3}
//
// States without a protocol line for an agent get no actions, which
// validate() reports.  Items of a section may also follow its header on
// the same line.

#include <fstream>
#include <ostream>
#include <sstream>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"
#include "icgs.hpp"

namespace atlapprox
{
  namespace detail
  {
    // words and the punctuation ( ) , : { } ->
    inline std::vector<std::string> split_line(std::string_view line, std::size_t lineno)
    {
      std::vector<std::string> out;
      std::size_t i = 0;
      while (i < line.size())
        {
          const char c = line[i];
          if (c == ' ' || c == '\t' || c == '\r')
            ++i;
          else if (line.substr(i, 2) == "->")
            {
              out.emplace_back("->");
              i += 2;
            }
          else if (c == '(' || c == ')' || c == ',' || c == ':' || c == '{' || c == '}')
            {
              out.emplace_back(1, c);
              ++i;
            }
          else
            {
              std::size_t j = i;
              while (j < line.size() && std::string_view(" \t\r(),:{}").find(line[j]) == std::string_view::npos
                     && line.substr(j, 2) != "->")
                ++j;
              if (j == i)
                throw ParseError(std::string("unexpected '") + c + "'", lineno, i + 1);
              out.emplace_back(line.substr(i, j - i));
              i = j;
            }
        }
      return out;
    }
  }

  inline Model read_model(std::istream& in)
  {
    ModelBuilder b;
    enum class Section { none, agents, states, actions, protocol, transitions, epistemic } sec = Section::none;
    std::string raw;
    std::size_t lineno = 0;
    std::set<std::string> seen_agents, seen_states, seen_actions;
    auto declare = [&](std::set<std::string>& seen, const std::string& name,
                       const char* kind) -> const std::string& {
      if (!seen.insert(name).second)
        throw ParseError(std::string(kind) + " '" + name + "' declared twice", lineno, 1);
      return name;
    };

    struct Pending
    {
      std::size_t line;
      std::vector<std::string> tokens;
      Section sec;
    };
    // protocols, transitions and blocks refer to names that may be
    // declared later, so they are applied after the declarations
    std::vector<Pending> deferred;

    while (std::getline(in, raw))
      {
        ++lineno;
        if (auto hash = raw.find('#'); hash != std::string::npos)
          raw.erase(hash);
        auto tok = detail::split_line(raw, lineno);
        if (tok.empty())
          continue;
        if (tok.size() >= 2 && tok[1] == ":")
          {
            const std::string& w = tok[0];
            Section next = w == "agents" ? Section::agents
              : w == "states" ? Section::states
              : w == "actions" ? Section::actions
              : w == "protocol" ? Section::protocol
              : w == "transitions" ? Section::transitions
              : w == "epistemic" ? Section::epistemic
              : Section::none;
            if (next != Section::none)
              {
                sec = next;
                tok.erase(tok.begin(), tok.begin() + 2);
                if (tok.empty())
                  continue;
              }
          }
        switch (sec)
          {
          case Section::none:
            throw ParseError("expected a section header (agents, states, actions, protocol, "
                             "transitions, epistemic)", lineno, 1);
          case Section::agents:
            for (const auto& a : tok)
              if (a != ",")
                b.add_agent(declare(seen_agents, a, "agent"));
            break;
          case Section::actions:
            for (const auto& a : tok)
              if (a != ",")
                b.add_action(declare(seen_actions, a, "action"));
            break;
          case Section::states:
            {
              if (tok[0] == ":" || tok[0] == "," || tok[0] == "label")
                throw ParseError("expected a state name", lineno, 1);
              const state_id s = b.add_state(declare(seen_states, tok[0], "state"));
              std::size_t i = 1;
              if (i < tok.size() && tok[i] == "label")
                ++i;
              if (i < tok.size())
                {
                  if (tok[i] != ":")
                    throw ParseError("expected ':' before the atoms of state " + tok[0], lineno, 1);
                  for (++i; i < tok.size(); ++i)
                    if (tok[i] != ",")
                      b.label(s, tok[i]);
                }
              break;
            }
          default:
            deferred.push_back({lineno, std::move(tok), sec});
          }
      }

    for (const auto& [line, tok, s] : deferred)
      {
        auto fail = [&](const std::string& what) { throw ParseError(what, line, 1); };
        try
          {
            switch (s)
              {
              case Section::protocol:
                {
                  if (tok.size() < 3 || tok[2] != ":")
                    fail("expected 'agent state: actions'");
                  std::vector<action_id> acts;
                  for (std::size_t i = 3; i < tok.size(); ++i)
                    acts.push_back(b.add_action(tok[i]));
                  b.set_protocol(b.agent(tok[0]), b.state(tok[1]), std::move(acts));
                  break;
                }
              case Section::transitions:
                {
                  // q ( a , b ) -> t
                  if (tok.size() < 5 || tok[1] != "(")
                    fail("expected 'state (actions) -> state'");
                  std::vector<action_id> joint;
                  std::size_t i = 2;
                  while (i < tok.size() && tok[i] != ")")
                    {
                      if (tok[i] != ",")
                        joint.push_back(b.add_action(tok[i]));
                      ++i;
                    }
                  if (i + 2 != tok.size() - 1 || tok[i + 1] != "->")
                    fail("expected 'state (actions) -> state'");
                  b.add_transition(b.state(tok[0]), joint, b.state(tok.back()));
                  break;
                }
              case Section::epistemic:
                {
                  if (tok.size() < 2 || tok[1] != ":")
                    fail("expected 'agent: {states} ...'");
                  const agent_id a = b.agent(tok[0]);
                  std::vector<state_id> blk;
                  bool open = false;
                  for (std::size_t i = 2; i < tok.size(); ++i)
                    {
                      if (tok[i] == "{")
                        {
                          if (open)
                            fail("nested '{'");
                          open = true;
                          blk.clear();
                        }
                      else if (tok[i] == "}")
                        {
                          if (!open)
                            fail("unmatched '}'");
                          open = false;
                          b.add_block(a, blk);
                        }
                      else if (tok[i] != ",")
                        {
                          if (!open)
                            fail("state outside '{...}'");
                          blk.push_back(b.state(tok[i]));
                        }
                    }
                  if (open)
                    fail("missing '}'");
                  break;
                }
              default:
                break;
              }
          }
        catch (const ModelError& e)
          {
            throw ParseError(e.what(), line, 1);
          }
      }
    return std::move(b).build();
  }

  inline Model read_model(std::string_view text)
  {
    std::istringstream in{std::string(text)};
    return read_model(in);
  }

  inline Model load_model(const std::string& path)
  {
    std::ifstream in(path);
    if (!in)
      throw ModelError("cannot open model file '" + path + "'");
    return read_model(in);
  }

  inline void write_model(std::ostream& out, const Model& m)
  {
    out << "agents:";
    for (const auto& a : m.agent_names())
      out << ' ' << a;
    out << "\nstates:\n";
    for (state_id s = 0; s < m.num_states(); ++s)
      {
        out << "  " << m.state_name(s);
        bool first = true;
        for (const auto& p : m.atom_names())
          if (m.label(p).contains(s))
            {
              out << (first ? " label:" : "") << ' ' << p;
              first = false;
            }
        out << '\n';
      }
    out << "actions:";
    for (const auto& a : m.action_names())
      out << ' ' << a;
    out << "\nprotocol:\n";
    for (state_id s = 0; s < m.num_states(); ++s)
      for (agent_id a = 0; a < m.num_agents(); ++a)
        {
          out << "  " << m.agent_name(a) << ' ' << m.state_name(s) << ':';
          for (action_id x : m.protocol(a, s))
            out << ' ' << m.action_name(x);
          out << '\n';
        }
    out << "transitions:\n";
    for (state_id s = 0; s < m.num_states(); ++s)
      for (std::size_t j = 0; j < m.joint_count(s); ++j)
        {
          if (m.successor(s, j) == no_state)
            continue;
          out << "  " << m.state_name(s) << " (";
          for (agent_id a = 0; a < m.num_agents(); ++a)
            out << (a ? ", " : "") << m.action_name(m.action_of(s, j, a));
          out << ") -> " << m.state_name(m.successor(s, j)) << '\n';
        }
    out << "epistemic:\n";
    for (agent_id a = 0; a < m.num_agents(); ++a)
      {
        bool any = false;
        std::ostringstream line;
        for (const auto& blk : m.epistemic(a).blocks)
          if (blk.size() > 1)
            {
              any = true;
              line << " {";
              for (std::size_t i = 0; i < blk.size(); ++i)
                line << (i ? " " : "") << m.state_name(blk[i]);
              line << '}';
            }
        if (any)
          out << "  " << m.agent_name(a) << ':' << line.str() << '\n';
      }
  }

  inline std::string write_model(const Model& m)
  {
    std::ostringstream out;
    write_model(out, m);
    return out.str();
  }
}
