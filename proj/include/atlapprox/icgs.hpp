#pragma once

// Concurrent epistemic game structures: the model, its builder and
// validator, epistemic neighborhoods, and uniform (ir) assignments.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "state_set.hpp"

namespace atlapprox
{
  using agent_id = std::uint32_t;
  using action_id = std::uint32_t;

  inline constexpr state_id no_state = std::numeric_limits<state_id>::max();
  inline constexpr action_id no_action = std::numeric_limits<action_id>::max();

  /// An equivalence relation over states, stored as blocks.
  ///
  /// Blocks are sorted internally and ordered by their first state.
  struct Partition
  {
    std::vector<std::uint32_t> block_of;
    std::vector<std::vector<state_id>> blocks;

    std::size_t size() const noexcept { return blocks.size(); }

    const std::vector<state_id>& block_containing(state_id s) const
    {
      return blocks[block_of[s]];
    }

    /// The identity relation on `n` states.
    static Partition discrete(std::size_t n)
    {
      Partition p;
      p.block_of.resize(n);
      p.blocks.resize(n);
      for (state_id s = 0; s < n; ++s)
        {
          p.block_of[s] = s;
          p.blocks[s] = {s};
        }
      return p;
    }

    /// Builds the partition whose blocks are the classes of `root`
    /// (any function mapping equivalent states to the same value).
    static Partition from_roots(const std::vector<state_id>& root)
    {
      Partition p;
      const std::size_t n = root.size();
      p.block_of.assign(n, 0);
      std::vector<std::uint32_t> index(n, std::numeric_limits<std::uint32_t>::max());
      for (state_id s = 0; s < n; ++s)
        {
          auto& idx = index[root[s]];
          if (idx == std::numeric_limits<std::uint32_t>::max())
            {
              idx = static_cast<std::uint32_t>(p.blocks.size());
              p.blocks.emplace_back();
            }
          p.block_of[s] = idx;
          p.blocks[idx].push_back(s);
        }
      return p;
    }
  };

  /// Union-find over states, used to close relations to equivalences.
  class DisjointSets
  {
  public:
    explicit DisjointSets(std::size_t n) : parent_(n)
    {
      std::iota(parent_.begin(), parent_.end(), state_id{0});
    }

    state_id find(state_id s)
    {
      while (parent_[s] != s)
        {
          parent_[s] = parent_[parent_[s]];
          s = parent_[s];
        }
      return s;
    }

    void unite(state_id a, state_id b)
    {
      a = find(a);
      b = find(b);
      if (a == b)
        return;
      if (b < a)
        std::swap(a, b);
      parent_[b] = a;
    }

    Partition partition()
    {
      std::vector<state_id> root(parent_.size());
      for (state_id s = 0; s < parent_.size(); ++s)
        root[s] = find(s);
      return Partition::from_roots(root);
    }

  private:
    std::vector<state_id> parent_;
  };

  /// A set of agents, kept sorted and duplicate-free.
  class Coalition
  {
  public:
    Coalition() = default;
    Coalition(std::initializer_list<agent_id> members) : members_(members) { normalize(); }
    explicit Coalition(std::vector<agent_id> members) : members_(std::move(members))
    {
      normalize();
    }

    std::span<const agent_id> members() const noexcept { return members_; }
    std::size_t size() const noexcept { return members_.size(); }
    bool empty() const noexcept { return members_.empty(); }
    bool contains(agent_id a) const
    {
      return std::binary_search(members_.begin(), members_.end(), a);
    }
    /// Position of `a` among the members, or size() when absent.
    std::size_t index_of(agent_id a) const
    {
      auto it = std::lower_bound(members_.begin(), members_.end(), a);
      return (it != members_.end() && *it == a)
        ? static_cast<std::size_t>(it - members_.begin()) : members_.size();
    }

    auto begin() const { return members_.begin(); }
    auto end() const { return members_.end(); }

    friend bool operator==(const Coalition&, const Coalition&) = default;
    friend auto operator<=>(const Coalition&, const Coalition&) = default;

  private:
    void normalize()
    {
      std::sort(members_.begin(), members_.end());
      members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
    }

    std::vector<agent_id> members_;
  };

  class ModelBuilder;

  /// \brief A concurrent epistemic game structure.
  ///
  /// Agents, states, actions and atoms are interned to dense indices in
  /// declaration order.  At each state the joint actions allowed by the
  /// protocol are numbered in mixed radix over the agents (first agent
  /// most significant, each agent's actions in declaration order), and
  /// the transition function is a dense table over those numbers.
  ///
  /// A Model is immutable once built; run validate() before evaluating.
  class Model
  {
  public:
    std::size_t num_agents() const noexcept { return agents_.size(); }
    std::size_t num_states() const noexcept { return states_.size(); }
    std::size_t num_actions() const noexcept { return actions_.size(); }

    const std::vector<std::string>& agent_names() const noexcept { return agents_; }
    const std::vector<std::string>& state_names() const noexcept { return states_; }
    const std::vector<std::string>& action_names() const noexcept { return actions_; }
    const std::vector<std::string>& atom_names() const noexcept { return atoms_; }

    const std::string& agent_name(agent_id a) const { return agents_.at(a); }
    const std::string& state_name(state_id s) const { return states_.at(s); }
    const std::string& action_name(action_id a) const { return actions_.at(a); }

    std::optional<agent_id> find_agent(std::string_view name) const
    {
      return lookup(agent_index_, name);
    }
    std::optional<state_id> find_state(std::string_view name) const
    {
      return lookup(state_index_, name);
    }
    std::optional<action_id> find_action(std::string_view name) const
    {
      return lookup(action_index_, name);
    }

    agent_id agent(std::string_view name) const
    {
      if (auto a = find_agent(name))
        return *a;
      throw ModelError("unknown agent '" + std::string(name) + "'");
    }
    state_id state(std::string_view name) const
    {
      if (auto s = find_state(name))
        return *s;
      throw ModelError("unknown state '" + std::string(name) + "'");
    }

    Coalition coalition(std::span<const std::string> names) const
    {
      std::vector<agent_id> ids;
      for (const auto& n : names)
        ids.push_back(agent(n));
      return Coalition(std::move(ids));
    }

    bool has_atom(std::string_view atom) const { return atom_index_.contains(std::string(atom)); }

    /// States labeled with `atom`.
    const StateSet& label(std::string_view atom) const
    {
      auto it = atom_index_.find(std::string(atom));
      if (it == atom_index_.end())
        throw ModelError("unknown atom '" + std::string(atom) + "'");
      return labels_[it->second];
    }

    /// d_a(q), sorted by action id.
    std::span<const action_id> protocol(agent_id a, state_id q) const
    {
      const std::size_t slot = q * agents_.size() + a;
      return {protocol_actions_.data() + protocol_offset_[slot], protocol_size_[slot]};
    }

    /// Number of joint actions allowed at q.
    std::size_t joint_count(state_id q) const
    {
      return transition_offset_[q + 1] - transition_offset_[q];
    }

    /// o(q, joint), or no_state if the table has a hole (see validate()).
    state_id successor(state_id q, std::size_t joint) const
    {
      return successor_[transition_offset_[q] + joint];
    }

    /// Index into protocol(a, q) of agent a's action in `joint`.
    std::size_t choice_of(state_id q, std::size_t joint, agent_id a) const
    {
      const std::size_t slot = q * agents_.size() + a;
      return (joint / stride_[slot]) % protocol_size_[slot];
    }

    action_id action_of(state_id q, std::size_t joint, agent_id a) const
    {
      return protocol(a, q)[choice_of(q, joint, a)];
    }

    /// Joint index for one protocol position per agent.
    std::size_t joint_index(state_id q, std::span<const std::size_t> choices) const
    {
      std::size_t j = 0;
      for (agent_id a = 0; a < agents_.size(); ++a)
        j += choices[a] * stride_[q * agents_.size() + a];
      return j;
    }

    const Partition& epistemic(agent_id a) const { return epistemic_.at(a); }

    /// Transitions that name a joint action outside the protocol.
    struct StrayTransition
    {
      state_id from;
      std::vector<action_id> joint;
      state_id to;
      bool conflict;  // same allowed joint action given two different targets
    };
    const std::vector<StrayTransition>& stray_transitions() const noexcept
    {
      return stray_;
    }

    /// Calls fn(successor) for every joint action at q.
    template <typename Fn>
    void for_each_successor(state_id q, Fn&& fn) const
    {
      const std::size_t b = transition_offset_[q], e = transition_offset_[q + 1];
      for (std::size_t i = b; i < e; ++i)
        fn(successor_[i]);
    }

    /// All one-step successors of q (sorted, unique).
    std::vector<state_id> successors(state_id q) const
    {
      std::vector<state_id> out;
      for_each_successor(q, [&](state_id t) { if (t != no_state) out.push_back(t); });
      std::sort(out.begin(), out.end());
      out.erase(std::unique(out.begin(), out.end()), out.end());
      return out;
    }

  private:
    friend class ModelBuilder;

    template <typename Map>
    static std::optional<std::uint32_t> lookup(const Map& m, std::string_view name)
    {
      auto it = m.find(std::string(name));
      if (it == m.end())
        return std::nullopt;
      return it->second;
    }

    std::vector<std::string> agents_, states_, actions_, atoms_;
    std::unordered_map<std::string, std::uint32_t> agent_index_, state_index_,
      action_index_, atom_index_;
    std::vector<StateSet> labels_;

    // protocol, indexed by q * num_agents + a
    std::vector<std::size_t> protocol_offset_;
    std::vector<std::uint32_t> protocol_size_;
    std::vector<std::size_t> stride_;
    std::vector<action_id> protocol_actions_;

    std::vector<std::size_t> transition_offset_;
    std::vector<state_id> successor_;
    std::vector<StrayTransition> stray_;

    std::vector<Partition> epistemic_;
  };

  /// \brief Incremental construction of a Model.
  ///
  /// Names are interned on first use.  Epistemic input is a list of
  /// indistinguishable pairs or blocks, closed to an equivalence on
  /// build().  The builder never rejects semantic defects (missing
  /// transitions, non-uniform protocols); validate() reports them.
  class ModelBuilder
  {
  public:
    agent_id add_agent(const std::string& name) { return intern(m_.agents_, m_.agent_index_, name); }
    state_id add_state(const std::string& name) { return intern(m_.states_, m_.state_index_, name); }
    action_id add_action(const std::string& name) { return intern(m_.actions_, m_.action_index_, name); }
    std::uint32_t add_atom(const std::string& name)
    {
      auto id = intern(m_.atoms_, m_.atom_index_, name);
      if (labeled_.size() < m_.atoms_.size())
        labeled_.resize(m_.atoms_.size());
      return id;
    }

    std::size_t num_agents() const { return m_.agents_.size(); }
    std::size_t num_states() const { return m_.states_.size(); }

    agent_id agent(std::string_view n) const { return require(m_.agent_index_, n, "agent"); }
    state_id state(std::string_view n) const { return require(m_.state_index_, n, "state"); }
    action_id action(std::string_view n) const { return require(m_.action_index_, n, "action"); }

    void label(state_id s, const std::string& atom)
    {
      labeled_[add_atom(atom)].push_back(s);
    }

    void set_protocol(agent_id a, state_id q, std::vector<action_id> acts)
    {
      std::sort(acts.begin(), acts.end());
      acts.erase(std::unique(acts.begin(), acts.end()), acts.end());
      protocol_[{q, a}] = std::move(acts);
    }

    /// Records o(q, joint) = target, with one action per agent in agent order.
    void add_transition(state_id q, std::span<const action_id> joint, state_id target)
    {
      if (joint.size() != m_.agents_.size())
        throw ModelError("transition at state '" + m_.states_.at(q) + "' lists "
                         + std::to_string(joint.size()) + " actions for "
                         + std::to_string(m_.agents_.size()) + " agents");
      transitions_.push_back({q, target, transition_actions_.size()});
      transition_actions_.insert(transition_actions_.end(), joint.begin(), joint.end());
    }

    void add_indistinguishable(agent_id a, state_id q1, state_id q2)
    {
      epistemic_pairs_.push_back({a, q1, q2});
    }

    void add_block(agent_id a, std::span<const state_id> block)
    {
      for (std::size_t i = 1; i < block.size(); ++i)
        add_indistinguishable(a, block[0], block[i]);
    }

    Model build() &&
    {
      const std::size_t na = m_.agents_.size(), ns = m_.states_.size();

      m_.labels_.assign(m_.atoms_.size(), StateSet(ns));
      for (std::size_t p = 0; p < labeled_.size(); ++p)
        for (state_id s : labeled_[p])
          m_.labels_[p].insert(s);

      m_.protocol_offset_.assign(ns * na, 0);
      m_.protocol_size_.assign(ns * na, 0);
      m_.stride_.assign(ns * na, 1);
      m_.transition_offset_.assign(ns + 1, 0);
      for (state_id q = 0; q < ns; ++q)
        {
          std::size_t joints = 1;
          for (agent_id a = 0; a < na; ++a)
            {
              const std::size_t slot = q * na + a;
              m_.protocol_offset_[slot] = m_.protocol_actions_.size();
              if (auto it = protocol_.find({q, a}); it != protocol_.end())
                {
                  m_.protocol_actions_.insert(m_.protocol_actions_.end(),
                                              it->second.begin(), it->second.end());
                  m_.protocol_size_[slot] = static_cast<std::uint32_t>(it->second.size());
                }
              joints *= m_.protocol_size_[slot];
            }
          std::size_t stride = 1;
          for (agent_id a = static_cast<agent_id>(na); a-- > 0;)
            {
              m_.stride_[q * na + a] = stride;
              stride *= std::max<std::size_t>(1, m_.protocol_size_[q * na + a]);
            }
          m_.transition_offset_[q + 1] = m_.transition_offset_[q] + joints;
        }
      m_.successor_.assign(m_.transition_offset_[ns], no_state);

      std::vector<std::size_t> choice(na);
      for (const auto& t : transitions_)
        {
          std::span<const action_id> joint(transition_actions_.data() + t.actions, na);
          bool allowed = true;
          for (agent_id a = 0; a < na && allowed; ++a)
            {
              auto d = m_.protocol(a, t.from);
              auto it = std::lower_bound(d.begin(), d.end(), joint[a]);
              if (it == d.end() || *it != joint[a])
                allowed = false;
              else
                choice[a] = static_cast<std::size_t>(it - d.begin());
            }
          if (!allowed)
            {
              m_.stray_.push_back({t.from, {joint.begin(), joint.end()}, t.to, false});
              continue;
            }
          state_id& slot = m_.successor_[m_.transition_offset_[t.from]
                                         + m_.joint_index(t.from, choice)];
          if (slot != no_state && slot != t.to)
            m_.stray_.push_back({t.from, {joint.begin(), joint.end()}, t.to, true});
          else
            slot = t.to;
        }

      std::vector<DisjointSets> rel(na, DisjointSets(ns));
      for (const auto& e : epistemic_pairs_)
        rel[e.agent].unite(e.a, e.b);
      for (auto& r : rel)
        m_.epistemic_.push_back(r.partition());

      return std::move(m_);
    }

  private:
    template <typename Map>
    static std::uint32_t intern(std::vector<std::string>& names, Map& index,
                                const std::string& name)
    {
      auto [it, fresh] = index.try_emplace(name, static_cast<std::uint32_t>(names.size()));
      if (fresh)
        names.push_back(name);
      return it->second;
    }

    template <typename Map>
    static std::uint32_t require(const Map& index, std::string_view n, const char* what)
    {
      auto it = index.find(std::string(n));
      if (it == index.end())
        throw ModelError(std::string("unknown ") + what + " '" + std::string(n) + "'");
      return it->second;
    }

    struct PendingTransition
    {
      state_id from;
      state_id to;
      std::size_t actions;
    };
    struct EpistemicPair
    {
      agent_id agent;
      state_id a, b;
    };

    Model m_;
    std::vector<std::vector<state_id>> labeled_;
    std::map<std::pair<state_id, agent_id>, std::vector<action_id>> protocol_;
    std::vector<PendingTransition> transitions_;
    std::vector<action_id> transition_actions_;
    std::vector<EpistemicPair> epistemic_pairs_;
  };

  // ---------------------------------------------------------------------
  // Validation

  struct Violation
  {
    enum class Kind
    {
      empty_protocol,
      missing_transition,
      undeclared_transition,
      conflicting_transition,
      bad_partition,
      non_uniform,
    };
    Kind kind;
    std::string message;
  };

  struct ValidationReport
  {
    std::vector<Violation> violations;

    bool ok() const noexcept { return violations.empty(); }
    std::size_t count(Violation::Kind k) const
    {
      return static_cast<std::size_t>(std::count_if(
        violations.begin(), violations.end(), [k](const Violation& v) { return v.kind == k; }));
    }
  };

  namespace detail
  {
    inline std::string joint_text(const Model& m, std::span<const action_id> joint)
    {
      std::string s = "(";
      for (std::size_t i = 0; i < joint.size(); ++i)
        {
          if (i)
            s += ' ';
          s += m.action_name(joint[i]);
        }
      return s + ")";
    }
  }

  /// Every violation of the model invariants: nonempty protocols, a
  /// transition for exactly the allowed joint actions, well-formed
  /// epistemic partitions, and uniform protocols.
  inline ValidationReport validate(const Model& m)
  {
    using K = Violation::Kind;
    ValidationReport r;
    const std::size_t na = m.num_agents(), ns = m.num_states();

    if (na == 0)
      r.violations.push_back({K::empty_protocol, "model declares no agents"});
    if (ns == 0)
      r.violations.push_back({K::empty_protocol, "model declares no states"});

    for (state_id q = 0; q < ns; ++q)
      {
        bool complete = true;
        for (agent_id a = 0; a < na; ++a)
          if (m.protocol(a, q).empty())
            {
              complete = false;
              r.violations.push_back({K::empty_protocol, "agent '" + m.agent_name(a)
                                      + "' has no action at state '" + m.state_name(q) + "'"});
            }
        if (!complete)
          continue;
        for (std::size_t j = 0; j < m.joint_count(q); ++j)
          if (m.successor(q, j) == no_state)
            {
              std::vector<action_id> joint(na);
              for (agent_id a = 0; a < na; ++a)
                joint[a] = m.action_of(q, j, a);
              r.violations.push_back({K::missing_transition, "no transition from '"
                                      + m.state_name(q) + "' on "
                                      + detail::joint_text(m, joint)});
            }
      }

    for (const auto& t : m.stray_transitions())
      r.violations.push_back({t.conflict ? K::conflicting_transition : K::undeclared_transition,
                              std::string(t.conflict ? "conflicting" : "disallowed")
                              + " transition from '" + m.state_name(t.from) + "' on "
                              + detail::joint_text(m, t.joint) + " to '"
                              + m.state_name(t.to) + "'"});

    for (agent_id a = 0; a < na; ++a)
      {
        const Partition& p = m.epistemic(a);
        std::vector<int> seen(ns, 0);
        bool wellformed = p.block_of.size() == ns;
        for (std::size_t b = 0; b < p.blocks.size() && wellformed; ++b)
          for (state_id s : p.blocks[b])
            if (s >= ns || seen[s]++ || p.block_of[s] != b)
              wellformed = false;
        if (wellformed && std::find(seen.begin(), seen.end(), 0) != seen.end())
          wellformed = false;
        if (!wellformed)
          {
            r.violations.push_back({K::bad_partition, "epistemic relation of agent '"
                                    + m.agent_name(a) + "' is not a partition of the states"});
            continue;
          }
        for (const auto& block : p.blocks)
          {
            auto first = m.protocol(a, block.front());
            for (std::size_t i = 1; i < block.size(); ++i)
              {
                auto other = m.protocol(a, block[i]);
                if (!std::equal(first.begin(), first.end(), other.begin(), other.end()))
                  r.violations.push_back({K::non_uniform, "agent '" + m.agent_name(a)
                                          + "' has different actions at indistinguishable states '"
                                          + m.state_name(block.front()) + "' and '"
                                          + m.state_name(block[i]) + "'"});
              }
          }
      }
    return r;
  }

  // ---------------------------------------------------------------------
  // Epistemic neighborhoods

  /// [q]_{~a}
  inline StateSet epistemic_class(const Model& m, agent_id a, state_id q)
  {
    if (a >= m.num_agents() || q >= m.num_states())
      throw ModelError("epistemic_class: unknown agent or state");
    StateSet r(m.num_states());
    for (state_id s : m.epistemic(a).block_containing(q))
      r.insert(s);
    return r;
  }

  /// Image of q under the union of the members' relations; {q} for the
  /// empty coalition.
  inline StateSet everybody_class(const Model& m, const Coalition& c, state_id q)
  {
    if (q >= m.num_states())
      throw ModelError("everybody_class: unknown state");
    StateSet r(m.num_states());
    r.insert(q);
    for (agent_id a : c)
      {
        if (a >= m.num_agents())
          throw ModelError("everybody_class: unknown agent");
        for (state_id s : m.epistemic(a).block_containing(q))
          r.insert(s);
      }
    return r;
  }

  /// Blocks of the transitive closure of the everybody-knows relation.
  inline Partition common_partition(const Model& m, const Coalition& c)
  {
    const std::size_t ns = m.num_states();
    if (c.empty())
      return Partition::discrete(ns);
    if (c.size() == 1)
      {
        if (c.members()[0] >= m.num_agents())
          throw ModelError("common_partition: unknown agent");
        return m.epistemic(c.members()[0]);
      }
    DisjointSets ds(ns);
    for (agent_id a : c)
      {
        if (a >= m.num_agents())
          throw ModelError("common_partition: unknown agent");
        for (const auto& block : m.epistemic(a).blocks)
          for (std::size_t i = 1; i < block.size(); ++i)
            ds.unite(block[0], block[i]);
      }
    return ds.partition();
  }

  /// [q]_{~C^A}
  inline StateSet common_class(const Model& m, const Coalition& c, state_id q)
  {
    if (q >= m.num_states())
      throw ModelError("common_class: unknown state");
    Partition p = common_partition(m, c);
    StateSet r(m.num_states());
    for (state_id s : p.block_containing(q))
      r.insert(s);
    return r;
  }

  // ---------------------------------------------------------------------
  // Uniform assignments

  /// \brief A partial uniform strategy of a coalition.
  ///
  /// `choice[i][q]` is the action of the i-th coalition member at q, or
  /// no_action outside the domain.
  struct UniformAssignment
  {
    Coalition coalition;
    StateSet domain;
    std::vector<std::vector<action_id>> choice;

    action_id at(agent_id a, state_id q) const
    {
      const std::size_t i = coalition.index_of(a);
      return i < coalition.size() ? choice[i][q] : no_action;
    }

    /// A total assignment from a function (agent, state) -> action.
    template <typename Fn>
    static UniformAssignment from_function(const Model& m, const Coalition& c, Fn&& fn)
    {
      UniformAssignment u{c, StateSet::full(m.num_states()), {}};
      for (agent_id a : c)
        {
          auto& row = u.choice.emplace_back(m.num_states(), no_action);
          for (state_id q = 0; q < m.num_states(); ++q)
            row[q] = fn(a, q);
        }
      return u;
    }
  };

  /// Checks both assignment invariants: uniformity over each member's
  /// epistemic blocks and protocol conformance.
  inline bool is_uniform(const Model& m, const UniformAssignment& u)
  {
    for (std::size_t i = 0; i < u.coalition.size(); ++i)
      {
        const agent_id a = u.coalition.members()[i];
        for (state_id q : u.domain)
          {
            const action_id act = u.choice[i][q];
            auto d = m.protocol(a, q);
            if (!std::binary_search(d.begin(), d.end(), act))
              return false;
            for (state_id q2 : m.epistemic(a).block_containing(q))
              if (u.domain.contains(q2) && u.choice[i][q2] != act)
                return false;
          }
      }
    return true;
  }

  /// \brief Odometer over the uniform assignments on a domain.
  ///
  /// A "piece" is the intersection of one member's epistemic block with
  /// the domain; an assignment picks one allowed action per piece.
  /// Order: members in agent order, pieces by first state, actions in
  /// declaration order; the last piece varies fastest.
  class AssignmentEnumerator
  {
  public:
    /// \param require_closed reject domains that cut through a member's
    ///        block (the contract of enumerate_assignments()).
    AssignmentEnumerator(const Model& m, const Coalition& c, const StateSet& domain,
                         bool require_closed = true)
      : current_{c, domain, {}}
    {
      for (agent_id a : c)
        {
          if (a >= m.num_agents())
            throw ModelError("unknown coalition member");
          const std::size_t member = current_.choice.size();
          current_.choice.emplace_back(m.num_states(), no_action);
          const Partition& p = m.epistemic(a);
          std::vector<std::uint32_t> piece_of_block(p.size(), std::numeric_limits<std::uint32_t>::max());
          for (state_id q : domain)
            {
              auto& idx = piece_of_block[p.block_of[q]];
              if (idx == std::numeric_limits<std::uint32_t>::max())
                {
                  idx = static_cast<std::uint32_t>(pieces_.size());
                  auto d = m.protocol(a, q);
                  pieces_.push_back({member, {}, {d.begin(), d.end()}});
                  if (require_closed)
                    for (state_id s : p.blocks[p.block_of[q]])
                      if (!domain.contains(s))
                        throw ModelError("assignment domain is not closed under the epistemic "
                                         "relation of agent '" + m.agent_name(a) + "'");
                }
              pieces_[idx].states.push_back(q);
            }
        }
      for (const auto& piece : pieces_)
        if (piece.actions.empty())
          exhausted_ = true;
      digits_.assign(pieces_.size(), 0);
      for (std::size_t i = 0; i < pieces_.size() && !exhausted_; ++i)
        write_piece(i);
    }

    /// Number of assignments (as a double: it can be astronomically large).
    double count() const
    {
      if (exhausted_ && !started_)
        return 0;
      double n = 1;
      for (const auto& p : pieces_)
        n *= static_cast<double>(p.actions.size());
      return n;
    }

    /// Advances to the next assignment; false when all have been seen.
    bool next()
    {
      if (exhausted_)
        return false;
      if (!started_)
        {
          started_ = true;
          return true;
        }
      for (std::size_t i = pieces_.size(); i-- > 0;)
        {
          if (++digits_[i] < pieces_[i].actions.size())
            {
              write_piece(i);
              return true;
            }
          digits_[i] = 0;
          write_piece(i);
        }
      exhausted_ = true;
      return false;
    }

    const UniformAssignment& current() const noexcept { return current_; }

    std::size_t num_pieces() const noexcept { return pieces_.size(); }

  private:
    struct Piece
    {
      std::size_t member;
      std::vector<state_id> states;
      std::vector<action_id> actions;
    };

    void write_piece(std::size_t i)
    {
      const Piece& p = pieces_[i];
      const action_id act = p.actions[digits_[i]];
      auto& row = current_.choice[p.member];
      for (state_id q : p.states)
        row[q] = act;
    }

    UniformAssignment current_;
    std::vector<Piece> pieces_;
    std::vector<std::size_t> digits_;
    bool started_ = false;
    bool exhausted_ = false;
  };

  /// Calls fn(assignment) for every uniform assignment whose domain is
  /// exactly `domain`, stopping early when fn returns false.  Returns the
  /// number of assignments visited.
  template <typename Fn>
  std::size_t enumerate_assignments(const Model& m, const Coalition& c, const StateSet& domain,
                                    Fn&& fn)
  {
    AssignmentEnumerator e(m, c, domain, true);
    std::size_t n = 0;
    while (e.next())
      {
        ++n;
        if (!fn(e.current()))
          break;
      }
    return n;
  }

  /// Calls fn(target) for every successor of q when the coalition plays
  /// `choice` (one action per member, no_action meaning unconstrained).
  template <typename Fn>
  void for_each_restricted_successor(const Model& m, const Coalition& c,
                                     std::span<const action_id> choice, state_id q, Fn&& fn)
  {
    const auto members = c.members();
    for (std::size_t j = 0; j < m.joint_count(q); ++j)
      {
        bool consistent = true;
        for (std::size_t i = 0; i < members.size() && consistent; ++i)
          if (choice[i] != no_action && m.action_of(q, j, members[i]) != choice[i])
            consistent = false;
        if (consistent)
          fn(m.successor(q, j));
      }
  }

  using SuccessorRelation = std::vector<std::vector<state_id>>;

  /// One-step successors when the coalition follows `u` inside its domain
  /// and everyone acts freely outside it.
  inline SuccessorRelation restrict(const Model& m, const UniformAssignment& u)
  {
    SuccessorRelation r(m.num_states());
    std::vector<action_id> choice(u.coalition.size());
    for (state_id q = 0; q < m.num_states(); ++q)
      {
        const bool inside = u.domain.contains(q);
        for (std::size_t i = 0; i < choice.size(); ++i)
          choice[i] = inside ? u.choice[i][q] : no_action;
        for_each_restricted_successor(m, u.coalition, choice, q,
                                      [&](state_id t) { r[q].push_back(t); });
        std::sort(r[q].begin(), r[q].end());
        r[q].erase(std::unique(r[q].begin(), r[q].end()), r[q].end());
      }
    return r;
  }
}
