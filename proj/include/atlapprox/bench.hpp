#pragma once

// Model generators: the small counterexample structures, the voting and
// coercion scenario, bridge endplay (standard and absent-minded
// declarer), and seeded random structures for property tests.

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <functional>
#include <iterator>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include "errors.hpp"
#include "icgs.hpp"

namespace atlapprox
{
  /// Seeded generator with portable bounded draws (the standard
  /// distributions differ between library implementations).
  class Rng
  {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform in [0, n).
    std::uint64_t below(std::uint64_t n)
    {
      if (n <= 1)
        return 0;
      const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max()
        - std::numeric_limits<std::uint64_t>::max() % n;
      std::uint64_t x;
      do
        x = engine_();
      while (x >= limit);
      return x % n;
    }

    bool coin() { return below(2) == 1; }

    template <typename T>
    void shuffle(std::vector<T>& v)
    {
      for (std::size_t i = v.size(); i > 1; --i)
        std::swap(v[i - 1], v[below(i)]);
    }

  private:
    std::mt19937_64 engine_;
  };

  namespace detail
  {
    // protocol + transitions helper for hand-written models
    struct HandBuilder
    {
      ModelBuilder b;

      void states(std::initializer_list<const char*> names)
      {
        for (auto n : names)
          b.add_state(n);
      }

      void allow(const std::string& agent, const std::string& state,
                 std::initializer_list<const char*> acts)
      {
        std::vector<action_id> ids;
        for (auto a : acts)
          ids.push_back(b.add_action(a));
        b.set_protocol(b.agent(agent), b.state(state), ids);
      }

      void move(const std::string& from, std::initializer_list<const char*> joint,
                const std::string& to)
      {
        std::vector<action_id> ids;
        for (auto a : joint)
          ids.push_back(b.add_action(a));
        b.add_transition(b.state(from), ids, b.state(to));
      }

      void block(const std::string& agent, std::initializer_list<const char*> states)
      {
        std::vector<state_id> ids;
        for (auto s : states)
          ids.push_back(b.state(s));
        b.add_block(b.agent(agent), ids);
      }
    };
  }

  /// q0 (p) and q1 each loop; agent 1 cannot tell them apart.
  inline Model m0()
  {
    detail::HandBuilder f;
    f.b.add_agent("1");
    f.states({"q0", "q1"});
    for (auto q : {"q0", "q1"})
      f.allow("1", q, {"a"});
    f.move("q0", {"a"}, "q0");
    f.move("q1", {"a"}, "q1");
    f.b.label(f.b.state("q0"), "p");
    f.block("1", {"q0", "q1"});
    return std::move(f.b).build();
  }

  /// four top states lead to q1..q4, where the two agents must
  /// coordinate (a,x) or (b,y) to reach the p-state.
  inline Model m1()
  {
    detail::HandBuilder f;
    f.b.add_agent("1");
    f.b.add_agent("2");
    f.states({"q0", "t1", "t2", "t3", "q1", "q2", "q3", "q4", "qp", "sink"});
    for (auto q : {"q0", "t1", "t2", "t3", "qp", "sink"})
      {
        f.allow("1", q, {"idle"});
        f.allow("2", q, {"idle"});
      }
    f.move("q0", {"idle", "idle"}, "q1");
    f.move("t2", {"idle", "idle"}, "q2");
    f.move("t3", {"idle", "idle"}, "q3");
    f.move("t1", {"idle", "idle"}, "q4");
    f.move("qp", {"idle", "idle"}, "qp");
    f.move("sink", {"idle", "idle"}, "sink");
    const std::map<std::string, std::vector<std::pair<const char*, const char*>>> wins = {
      {"q1", {{"a", "x"}}},
      {"q2", {{"a", "x"}, {"b", "y"}}},
      {"q3", {{"a", "x"}, {"b", "y"}}},
      {"q4", {{"b", "y"}}},
    };
    for (const auto& [q, good] : wins)
      {
        f.allow("1", q, {"a", "b"});
        f.allow("2", q, {"x", "y"});
        for (auto a1 : {"a", "b"})
          for (auto a2 : {"x", "y"})
            {
              const bool hit = std::any_of(good.begin(), good.end(), [&](const auto& g) {
                return std::string(g.first) == a1 && std::string(g.second) == a2;
              });
              std::vector<action_id> j = {f.b.action(a1), f.b.action(a2)};
              f.b.add_transition(f.b.state(q), j, f.b.state(hit ? "qp" : "sink"));
            }
      }
    f.b.label(f.b.state("qp"), "p");
    f.block("1", {"q0", "t1", "t2", "t3"});
    f.block("1", {"q1", "q2"});
    f.block("1", {"q3", "q4"});
    f.block("2", {"q2", "q3"});
    return std::move(f.b).build();
  }

  /// q1 -> q0 -> q2 (p), with q0 ~1 q1.
  inline Model m2()
  {
    detail::HandBuilder f;
    f.b.add_agent("1");
    f.states({"q0", "q1", "q2"});
    for (auto q : {"q0", "q1", "q2"})
      f.allow("1", q, {"a"});
    f.move("q0", {"a"}, "q2");
    f.move("q1", {"a"}, "q0");
    f.move("q2", {"a"}, "q2");
    f.b.label(f.b.state("q2"), "p");
    f.block("1", {"q0", "q1"});
    return std::move(f.b).build();
  }

  /// q0 -> q2, q1 loops; p at q1 and q2; q0 ~1 q1.
  inline Model m3()
  {
    detail::HandBuilder f;
    f.b.add_agent("1");
    f.states({"q0", "q1", "q2"});
    for (auto q : {"q0", "q1", "q2"})
      f.allow("1", q, {"a"});
    f.move("q0", {"a"}, "q2");
    f.move("q1", {"a"}, "q1");
    f.move("q2", {"a"}, "q2");
    f.b.label(f.b.state("q1"), "p");
    f.b.label(f.b.state("q2"), "p");
    f.block("1", {"q0", "q1"});
    return std::move(f.b).build();
  }

  /// one voter v and the coercer c.
  inline Model m_vote()
  {
    detail::HandBuilder f;
    f.b.add_agent("v");
    f.b.add_agent("c");
    f.states({"q0", "q1", "q2", "q3", "q4", "q5", "q6", "q7", "q8", "q9", "q10"});
    f.allow("v", "q0", {"vote1", "vote2"});
    f.allow("c", "q0", {"idle"});
    f.move("q0", {"vote1", "idle"}, "q1");
    f.move("q0", {"vote2", "idle"}, "q2");
    for (auto q : {"q1", "q2"})
      {
        f.allow("v", q, {"give", "ng"});
        f.allow("c", q, {"idle"});
      }
    f.move("q1", {"give", "idle"}, "q3");
    f.move("q1", {"ng", "idle"}, "q4");
    f.move("q2", {"give", "idle"}, "q6");
    f.move("q2", {"ng", "idle"}, "q5");
    const std::pair<const char*, const char*> punish[] = {
      {"q3", "q7"}, {"q4", "q8"}, {"q5", "q9"}, {"q6", "q10"}};
    for (auto [q, to] : punish)
      {
        f.allow("v", q, {"idle"});
        f.allow("c", q, {"pun", "np"});
        f.move(q, {"idle", "pun"}, to);
        f.move(q, {"idle", "np"}, q);
      }
    for (auto q : {"q7", "q8", "q9", "q10"})
      {
        f.allow("v", q, {"idle"});
        f.allow("c", q, {"idle"});
        f.move(q, {"idle", "idle"}, q);
      }
    for (auto q : {"q1", "q3", "q4", "q7", "q8"})
      f.b.label(f.b.state(q), "vote1");
    for (auto q : {"q2", "q5", "q6", "q9", "q10"})
      f.b.label(f.b.state(q), "vote2");
    for (auto q : {"q7", "q8", "q9", "q10"})
      f.b.label(f.b.state(q), "pun");
    f.block("c", {"q1", "q2"});
    f.block("c", {"q4", "q5"});
    f.block("c", {"q8", "q9"});
    return std::move(f.b).build();
  }

  // ---------------------------------------------------------------------
  // Voting and coercion, k voters

  struct VotingInstance
  {
    int k = 1;
  };

  namespace detail
  {
    // One voter module, states 0..14.
    struct VoterModule
    {
      // coercer-observable class of each local state
      static int coercer_class(int l)
      {
        switch (l)
          {
          case 2: return 1;
          case 5: return 4;
          case 12: return 9;
          case 11: return 10;
          default: return l;
          }
      }

      static bool deciding(int l) { return l >= 3 && l <= 6; }

      // voter options at l: names and targets
      static std::vector<std::pair<const char*, int>> voter_moves(int l)
      {
        switch (l)
          {
          case 0: return {{"vote1", 1}, {"vote2", 2}, {"wait", 0}};
          case 1: return {{"give", 3}, {"ng", 4}, {"wait", 1}};
          case 2: return {{"give", 6}, {"ng", 5}, {"wait", 2}};
          default: return {{"wait", l}};
          }
      }

      // coercer's decision at a deciding state: punish?
      static int after_decision(int l, bool punish)
      {
        switch (l)
          {
          case 3: return punish ? 8 : 7;
          case 4: return punish ? 10 : 9;
          case 5: return punish ? 11 : 12;
          default: return punish ? 13 : 14;
          }
      }
    };
  }

  /// \brief Product of k voter modules with one coercer.
  ///
  /// The coercer's action names one decision ('p' punish, 'n' spare) per
  /// voter awaiting it, and '-' for the others; "wait" if nobody is
  /// waiting.  Voters observe only their own module; the coercer sees each
  /// module up to the classes {q1,q2} {q4,q5} {q9,q12} {q10,q11}.
  inline Model gen_voting(const VotingInstance& inst)
  {
    using detail::VoterModule;
    const int k = inst.k;
    if (k < 1)
      throw ModelError("voting: k must be at least 1");
    if (k > 6)
      throw ModelError("voting: k above 6 is not supported");

    ModelBuilder b;
    std::vector<agent_id> voters;
    for (int i = 1; i <= k; ++i)
      voters.push_back(b.add_agent("v" + std::to_string(i)));
    const agent_id coercer = b.add_agent("c");

    std::size_t total = 1;
    for (int i = 0; i < k; ++i)
      total *= 15;

    auto decode = [&](std::size_t g) {
      std::vector<int> l(k);
      for (int i = k - 1; i >= 0; --i)
        {
          l[i] = static_cast<int>(g % 15);
          g /= 15;
        }
      return l;
    };
    auto encode = [&](const std::vector<int>& l) {
      std::size_t g = 0;
      for (int i = 0; i < k; ++i)
        g = g * 15 + static_cast<std::size_t>(l[i]);
      return g;
    };

    for (std::size_t g = 0; g < total; ++g)
      {
        auto l = decode(g);
        std::string name = "q";
        for (int i = 0; i < k; ++i)
          name += (i ? "_" : "") + std::to_string(l[i]);
        b.add_state(name);
      }

    for (std::size_t g = 0; g < total; ++g)
      {
        const auto l = decode(g);
        const state_id q = static_cast<state_id>(g);
        for (int i = 0; i < k; ++i)
          {
            const std::string v = std::to_string(i + 1);
            const int li = l[i];
            if (li == 1 || li == 3 || li == 4 || (li >= 7 && li <= 10))
              b.label(q, "vote" + v + "_1");
            if (li == 2 || li == 5 || li == 6 || li >= 11)
              b.label(q, "vote" + v + "_2");
            if (li == 8 || li == 10 || li == 11 || li == 13)
              b.label(q, "pun" + v);
            if (li >= 7)
              b.label(q, "finish" + v);
          }

        std::vector<std::vector<std::pair<action_id, int>>> vm(k);
        for (int i = 0; i < k; ++i)
          {
            std::vector<action_id> acts;
            for (auto [name, to] : VoterModule::voter_moves(l[i]))
              {
                vm[i].push_back({b.add_action(name), to});
                acts.push_back(b.action(name));
              }
            b.set_protocol(voters[i], q, acts);
          }

        std::vector<int> deciders;
        for (int i = 0; i < k; ++i)
          if (VoterModule::deciding(l[i]))
            deciders.push_back(i);
        std::vector<std::pair<action_id, std::uint32_t>> cm;  // action, punish mask
        if (deciders.empty())
          cm.push_back({b.add_action("wait"), 0});
        else
          for (std::uint32_t mask = 0; mask < (1u << deciders.size()); ++mask)
            {
              std::string name(k, '-');
              for (std::size_t d = 0; d < deciders.size(); ++d)
                name[deciders[d]] = (mask >> d) & 1 ? 'p' : 'n';
              cm.push_back({b.add_action("c" + name), mask});
            }
        {
          std::vector<action_id> acts;
          for (auto& [a, m] : cm)
            acts.push_back(a);
          b.set_protocol(coercer, q, acts);
        }

        // all joint actions
        std::vector<std::size_t> pick(k, 0);
        std::vector<action_id> joint(k + 1);
        for (;;)
          {
            for (const auto& [ca, mask] : cm)
              {
                std::vector<int> next(k);
                for (int i = 0; i < k; ++i)
                  {
                    joint[i] = vm[i][pick[i]].first;
                    next[i] = vm[i][pick[i]].second;
                  }
                for (std::size_t d = 0; d < deciders.size(); ++d)
                  next[deciders[d]] = VoterModule::after_decision(l[deciders[d]], (mask >> d) & 1);
                joint[k] = ca;
                b.add_transition(q, joint, static_cast<state_id>(encode(next)));
              }
            int i = k - 1;
            while (i >= 0 && ++pick[i] == vm[i].size())
              pick[i--] = 0;
            if (i < 0)
              break;
          }
      }

    // epistemic relations via class representatives
    for (int i = 0; i < k; ++i)
      {
        std::map<int, std::vector<state_id>> blocks;
        for (std::size_t g = 0; g < total; ++g)
          blocks[decode(g)[i]].push_back(static_cast<state_id>(g));
        for (const auto& [key, blk] : blocks)
          b.add_block(voters[i], blk);
      }
    {
      std::map<std::size_t, std::vector<state_id>> blocks;
      for (std::size_t g = 0; g < total; ++g)
        {
          auto l = decode(g);
          for (auto& x : l)
            x = VoterModule::coercer_class(x);
          blocks[encode(l)].push_back(static_cast<state_id>(g));
        }
      for (const auto& [key, blk] : blocks)
        b.add_block(coercer, blk);
    }
    return std::move(b).build();
  }

  // ---------------------------------------------------------------------
  // Bridge endplay

  struct BridgeInstance
  {
    int n = 1;  // ranks per suit
    int k = 1;  // cards per hand
    std::uint64_t seed = 0;
  };

  /// A concrete deal: hands indexed N, E, S, W; cards numbered
  /// suit * n + rank (higher rank wins within a suit).
  struct BridgeDeal
  {
    int n = 1, k = 1;
    std::array<std::vector<int>, 4> hands;
    std::vector<int> played;  // cards out of play before the endplay
  };

  namespace detail
  {
    enum Seat { north = 0, east = 1, south = 2, west = 3 };

    inline std::string card_name(int card, int n)
    {
      static const char suits[] = {'c', 'd', 'h', 's'};
      return std::string(1, suits[card / n]) + std::to_string(card % n);
    }

    using CardMask = std::uint32_t;  // n <= 8 gives at most 32 cards

    inline CardMask mask_of(const std::vector<int>& cards)
    {
      CardMask m = 0;
      for (int c : cards)
        m |= CardMask{1} << c;
      return m;
    }

    inline bool ns_side(int seat) { return seat == north || seat == south; }
  }

  /// Random consistent deal for an instance.
  inline BridgeDeal deal_bridge(const BridgeInstance& inst)
  {
    if (inst.k < 1 || inst.k > inst.n)
      throw ModelError("bridge: need 1 <= k <= n");
    if (inst.n > 8)
      throw ModelError("bridge: n above 8 is not supported");
    Rng rng(inst.seed * 0x9e3779b97f4a7c15ull + static_cast<std::uint64_t>(inst.n * 31 + inst.k));
    std::vector<int> deck(4 * inst.n);
    std::iota(deck.begin(), deck.end(), 0);
    rng.shuffle(deck);
    BridgeDeal d;
    d.n = inst.n;
    d.k = inst.k;
    for (int s = 0; s < 4; ++s)
      {
        d.hands[s].assign(deck.begin() + s * inst.k, deck.begin() + (s + 1) * inst.k);
        std::sort(d.hands[s].begin(), d.hands[s].end());
      }
    d.played.assign(deck.begin() + 4 * inst.k, deck.end());
    std::sort(d.played.begin(), d.played.end());
    return d;
  }

  namespace detail
  {
    struct BridgeState
    {
      std::array<CardMask, 4> hand{};
      CardMask used = 0;
      std::int8_t leader = south;
      std::array<std::int8_t, 4> table{-1, -1, -1, -1};  // card per seat in this trick
      std::int8_t ns = 0, ew = 0;

      bool operator<(const BridgeState& o) const
      {
        return std::tie(hand, used, leader, table, ns, ew)
          < std::tie(o.hand, o.used, o.leader, o.table, o.ns, o.ew);
      }

      int on_table() const
      {
        return static_cast<int>(std::count_if(table.begin(), table.end(),
                                              [](std::int8_t c) { return c >= 0; }));
      }
      bool finished() const
      {
        return on_table() == 0 && std::all_of(hand.begin(), hand.end(),
                                              [](CardMask h) { return h == 0; });
      }
    };

    // cards seat may legally play, given the led suit (if any)
    inline std::vector<int> legal_cards(const BridgeState& s, int seat, int n)
    {
      std::vector<int> all, follow;
      const int lead = s.table[s.leader];
      for (int c = 0; c < 32; ++c)
        if (s.hand[seat] >> c & 1)
          {
            all.push_back(c);
            if (lead >= 0 && c / n == lead / n)
              follow.push_back(c);
          }
      return follow.empty() ? all : follow;
    }

    inline BridgeState resolve(BridgeState s, int n)
    {
      const int lead = s.table[s.leader];
      int winner = s.leader;
      for (int seat = 0; seat < 4; ++seat)
        {
          const int c = s.table[seat];
          if (c / n == lead / n && c > s.table[winner])
            winner = seat;
        }
      for (int seat = 0; seat < 4; ++seat)
        {
          s.used |= CardMask{1} << s.table[seat];
          s.table[seat] = -1;
        }
      (ns_side(winner) ? s.ns : s.ew) += 1;
      s.leader = static_cast<std::int8_t>(winner);
      return s;
    }

    // seat order within a trick, starting from the leader (clockwise)
    inline int seat_at(const BridgeState& s, int pos) { return (s.leader + pos) % 4; }

    struct BridgeGraph
    {
      std::vector<BridgeState> states;
      std::map<BridgeState, state_id> index;

      state_id intern(const BridgeState& s)
      {
        auto [it, fresh] = index.try_emplace(s, static_cast<state_id>(states.size()));
        if (fresh)
          states.push_back(s);
        return it->second;
      }
    };

    inline std::string state_key(const BridgeState& s)
    {
      std::string key;
      for (int seat = 0; seat < 4; ++seat)
        key += std::to_string(s.hand[seat]) + ",";
      key += "u" + std::to_string(s.used) + "l" + std::to_string(s.leader) + "t";
      for (int seat = 0; seat < 4; ++seat)
        key += std::to_string(s.table[seat]) + ",";
      key += "s" + std::to_string(s.ns) + "-" + std::to_string(s.ew);
      return key;
    }

    /// Shared driver: `moves(state)` returns, per agent in N,E,S,W
    /// order, the list of (action name, effect) options, and `apply`
    /// combines one option per agent into a successor.  `observe` is S's
    /// local view.
    struct BridgeRules
    {
      // an option: action name and the (seat, card) it plays, seat -1 for wait
      struct Option
      {
        std::string name;
        int seat = -1;
        int card = -1;
      };
      std::function<std::array<std::vector<Option>, 4>(const BridgeState&)> moves;
      std::function<std::string(const BridgeState&)> observe;
    };

    inline Model build_bridge(const BridgeDeal& d, const BridgeRules& rules)
    {
      const int n = d.n, k = d.k;
      // beginning states: every split of the E/W cards consistent with S's view
      std::vector<int> hidden = d.hands[east];
      hidden.insert(hidden.end(), d.hands[west].begin(), d.hands[west].end());
      std::sort(hidden.begin(), hidden.end());
      BridgeGraph g;
      std::vector<state_id> frontier;
      const std::size_t h = hidden.size();
      for (std::uint32_t pick = 0; pick < (1u << h); ++pick)
        {
          if (std::popcount(pick) != k)
            continue;
          BridgeState s;
          s.hand[north] = mask_of(d.hands[north]);
          s.hand[south] = mask_of(d.hands[south]);
          for (std::size_t i = 0; i < h; ++i)
            s.hand[(pick >> i & 1) ? east : west] |= CardMask{1} << hidden[i];
          s.used = mask_of(d.played);
          s.leader = south;
          const std::size_t before = g.states.size();
          const state_id id = g.intern(s);
          if (g.states.size() > before)
            frontier.push_back(id);
        }
      const std::size_t initial = g.states.size();

      struct Edge
      {
        state_id from;
        std::array<std::string, 4> joint;
        state_id to;
      };
      std::vector<Edge> edges;
      std::vector<std::array<std::vector<std::string>, 4>> protocol;

      for (std::size_t next = 0; next < g.states.size(); ++next)
        {
          const BridgeState s = g.states[next];
          const auto opts = rules.moves(s);
          std::array<std::vector<std::string>, 4> names;
          for (int a = 0; a < 4; ++a)
            for (const auto& o : opts[a])
              names[a].push_back(o.name);
          protocol.push_back(names);
          std::array<std::size_t, 4> pick{};
          for (;;)
            {
              BridgeState t = s;
              bool any_card = false;
              for (int a = 0; a < 4; ++a)
                {
                  const auto& o = opts[a][pick[a]];
                  if (o.seat >= 0)
                    {
                      t.hand[o.seat] &= ~(CardMask{1} << o.card);
                      t.table[o.seat] = static_cast<std::int8_t>(o.card);
                      any_card = true;
                    }
                }
              if (!any_card && s.on_table() == 4)
                t = resolve(s, n);
              const state_id to = g.intern(t);
              edges.push_back({static_cast<state_id>(next),
                               {opts[0][pick[0]].name, opts[1][pick[1]].name,
                                opts[2][pick[2]].name, opts[3][pick[3]].name},
                               to});
              int a = 3;
              while (a >= 0 && ++pick[a] == opts[a].size())
                pick[a--] = 0;
              if (a < 0)
                break;
            }
        }

      ModelBuilder b;
      for (auto name : {"N", "E", "S", "W"})
        b.add_agent(name);
      for (std::size_t i = 0; i < g.states.size(); ++i)
        b.add_state((i < initial ? "init" : "s") + std::to_string(i));
      for (std::size_t i = 0; i < g.states.size(); ++i)
        {
          for (agent_id a = 0; a < 4; ++a)
            {
              std::vector<action_id> acts;
              for (const auto& nm : protocol[i][a])
                acts.push_back(b.add_action(nm));
              b.set_protocol(a, static_cast<state_id>(i), acts);
            }
          const BridgeState& s = g.states[i];
          if (s.finished() && 2 * s.ns > k)
            b.label(static_cast<state_id>(i), "win");
          if (s.finished())
            b.label(static_cast<state_id>(i), "end");
        }
      b.add_atom("win");
      for (const auto& e : edges)
        {
          std::array<action_id, 4> j;
          for (int a = 0; a < 4; ++a)
            j[a] = b.action(e.joint[a]);
          b.add_transition(e.from, j, e.to);
        }
      std::map<std::string, std::vector<state_id>> view;
      for (std::size_t i = 0; i < g.states.size(); ++i)
        view[rules.observe(g.states[i])].push_back(static_cast<state_id>(i));
      for (const auto& [key, blk] : view)
        b.add_block(south, blk);
      return std::move(b).build();
    }

    inline std::string card_list(CardMask m, int n)
    {
      std::string s;
      for (int c = 0; c < 32; ++c)
        if (m >> c & 1)
          s += card_name(c, n);
      return s;
    }
  }

  /// Number of beginning states: the splits of the opponents' cards.
  inline std::size_t bridge_initial_states(const Model& m)
  {
    std::size_t n = 0;
    for (const auto& name : m.state_names())
      n += name.rfind("init", 0) == 0;
    return n;
  }

  /// \brief Turn-based endplay: S declares, playing both its own and
  /// the dummy N's cards; E and W see everything.
  ///
  /// A completed trick is cleared by a separate step where everyone
  /// waits.  S observes its hand, the dummy's, the used cards, the table
  /// and the score.
  inline Model gen_bridge(const BridgeDeal& d)
  {
    using namespace detail;
    const int n = d.n;
    BridgeRules rules;
    rules.moves = [n](const BridgeState& s) {
      std::array<std::vector<BridgeRules::Option>, 4> opts;
      for (auto& o : opts)
        o.push_back({"wait"});
      const int played = s.on_table();
      if (s.finished() || played == 4)
        return opts;
      const int seat = seat_at(s, played);
      const int agent = seat == north ? south : seat;
      opts[agent].clear();
      for (int c : legal_cards(s, seat, n))
        opts[agent].push_back({card_name(c, n), seat, c});
      return opts;
    };
    rules.observe = [n](const BridgeState& s) {
      std::string v = card_list(s.hand[south], n) + "|" + card_list(s.hand[north], n) + "|"
        + std::to_string(s.used) + "|" + std::to_string(s.leader) + "|";
      for (int seat = 0; seat < 4; ++seat)
        v += std::to_string(s.table[seat]) + ",";
      return v + "|" + std::to_string(s.ns) + "-" + std::to_string(s.ew);
    };
    return build_bridge(d, rules);
  }

  inline Model gen_bridge(const BridgeInstance& inst) { return gen_bridge(deal_bridge(inst)); }

  /// \brief Endplay with an absent-minded declarer.
  ///
  /// S sees the lead, its own and the dummy's played cards, but not the
  /// opponents' follow-ups until the trick is cleared.  After the lead,
  /// S may play a pending S or N card at any step (or wait) while the
  /// next opponent in clockwise order plays; an opponent plays only once
  /// every seat before it has played.
  inline Model gen_bridge_absentminded(const BridgeDeal& d)
  {
    using namespace detail;
    const int n = d.n;
    BridgeRules rules;
    rules.moves = [n](const BridgeState& s) {
      std::array<std::vector<BridgeRules::Option>, 4> opts;
      for (auto& o : opts)
        o.push_back({"wait"});
      const int played = s.on_table();
      if (s.finished() || played == 4)
        return opts;
      const bool led = s.table[s.leader] >= 0;
      if (!led)
        {
          const int seat = s.leader;
          const int agent = seat == north ? south : seat;
          opts[agent].clear();
          for (int c : legal_cards(s, seat, n))
            opts[agent].push_back({card_name(c, n), seat, c});
          return opts;
        }
      // S: any pending declarer-side seat
      for (int seat : {north, south})
        if (s.table[seat] < 0)
          for (int c : legal_cards(s, seat, n))
            opts[south].push_back({card_name(c, n), seat, c});
      // the first opponent in order still to play, if all before it played
      for (int pos = 1; pos < 4; ++pos)
        {
          const int seat = seat_at(s, pos);
          if (s.table[seat] >= 0)
            continue;
          if (!ns_side(seat))
            {
              opts[seat].clear();
              for (int c : legal_cards(s, seat, n))
                opts[seat].push_back({card_name(c, n), seat, c});
            }
          break;
        }
      return opts;
    };
    rules.observe = [n](const BridgeState& s) {
      std::string v = card_list(s.hand[south], n) + "|" + card_list(s.hand[north], n) + "|"
        + std::to_string(s.used) + "|" + std::to_string(s.leader) + "|"
        + std::to_string(s.table[s.leader]) + "|" + std::to_string(s.table[north]) + ","
        + std::to_string(s.table[south]);
      return v + "|" + std::to_string(s.ns) + "-" + std::to_string(s.ew);
    };
    return build_bridge(d, rules);
  }

  inline Model gen_bridge_absentminded(const BridgeInstance& inst)
  {
    return gen_bridge_absentminded(deal_bridge(inst));
  }

  // ---------------------------------------------------------------------
  // Random structures

  struct RandomParams
  {
    std::size_t num_states = 4;
    std::size_t num_agents = 1;
    std::size_t num_actions = 2;
    std::size_t epistemic_block_size = 2;
    std::size_t num_atoms = 2;  // atoms p, q, r, ...
    std::uint64_t seed = 0;
    /// If set, no transition stays inside this agent's blocks (self-loops
    /// only at singleton blocks).
    std::optional<agent_id> lockstep_for;
  };

  /// Seeded random structure; always passes validate().
  ///
  /// Protocols are drawn per state and then intersected over each block
  /// for uniformity; an empty intersection falls back to the block's
  /// first action of its first state.
  inline Model gen_random(const RandomParams& p)
  {
    if (p.num_states < 1 || p.num_agents < 1 || p.num_actions < 1 || p.epistemic_block_size < 1)
      throw ModelError("random: all parameters must be at least 1");
    if (p.lockstep_for && (*p.lockstep_for >= p.num_agents
                           || (p.epistemic_block_size >= p.num_states && p.num_states > 1)))
      throw ModelError("random: lockstep needs a valid agent and more than one block");
    Rng rng(p.seed);
    ModelBuilder b;
    for (std::size_t a = 0; a < p.num_agents; ++a)
      b.add_agent(std::to_string(a + 1));
    for (std::size_t s = 0; s < p.num_states; ++s)
      b.add_state("s" + std::to_string(s));
    std::vector<action_id> acts;
    for (std::size_t i = 0; i < p.num_actions; ++i)
      acts.push_back(b.add_action("a" + std::to_string(i)));
    for (std::size_t i = 0; i < p.num_atoms; ++i)
      b.add_atom(std::string(1, static_cast<char>('p' + i)));

    const std::size_t ns = p.num_states, na = p.num_agents;
    std::vector<std::vector<std::vector<state_id>>> blocks(na);
    std::vector<std::vector<std::size_t>> block_of(na, std::vector<std::size_t>(ns));
    for (std::size_t a = 0; a < na; ++a)
      {
        std::vector<state_id> order(ns);
        std::iota(order.begin(), order.end(), state_id{0});
        rng.shuffle(order);
        for (std::size_t i = 0; i < ns; i += p.epistemic_block_size)
          {
            std::vector<state_id> blk(order.begin() + i,
                                      order.begin() + std::min(ns, i + p.epistemic_block_size));
            std::sort(blk.begin(), blk.end());
            for (state_id s : blk)
              block_of[a][s] = blocks[a].size();
            blocks[a].push_back(blk);
          }
      }

    std::vector<std::vector<std::vector<action_id>>> proto(na, std::vector<std::vector<action_id>>(ns));
    for (std::size_t a = 0; a < na; ++a)
      for (std::size_t s = 0; s < ns; ++s)
        {
          for (action_id x : acts)
            if (rng.coin())
              proto[a][s].push_back(x);
          if (proto[a][s].empty())
            proto[a][s].push_back(acts[rng.below(acts.size())]);
        }
    for (std::size_t a = 0; a < na; ++a)
      for (const auto& blk : blocks[a])
        {
          std::vector<action_id> common = proto[a][blk.front()];
          for (state_id s : blk)
            {
              std::vector<action_id> keep;
              std::set_intersection(common.begin(), common.end(), proto[a][s].begin(),
                                    proto[a][s].end(), std::back_inserter(keep));
              common = std::move(keep);
            }
          if (common.empty())
            common = {proto[a][blk.front()].front()};
          for (state_id s : blk)
            {
              proto[a][s] = common;
              b.set_protocol(static_cast<agent_id>(a), s, common);
            }
        }

    for (state_id s = 0; s < ns; ++s)
      {
        for (std::size_t i = 0; i < p.num_atoms; ++i)
          if (rng.coin())
            b.label(s, std::string(1, static_cast<char>('p' + i)));

        std::vector<state_id> allowed;
        for (state_id t = 0; t < ns; ++t)
          {
            if (p.lockstep_for)
              {
                const agent_id a = *p.lockstep_for;
                const bool same = block_of[a][t] == block_of[a][s];
                if (same && (t != s || blocks[a][block_of[a][s]].size() > 1))
                  continue;
              }
            allowed.push_back(t);
          }

        std::vector<std::size_t> pick(na, 0);
        std::vector<action_id> joint(na);
        for (;;)
          {
            for (std::size_t a = 0; a < na; ++a)
              joint[a] = proto[a][s][pick[a]];
            b.add_transition(s, joint, allowed[rng.below(allowed.size())]);
            std::size_t a = na;
            while (a > 0 && ++pick[a - 1] == proto[a - 1][s].size())
              pick[--a] = 0;
            if (a == 0)
              break;
          }
      }

    for (std::size_t a = 0; a < na; ++a)
      for (const auto& blk : blocks[a])
        b.add_block(static_cast<agent_id>(a), blk);
    return std::move(b).build();
  }
}
