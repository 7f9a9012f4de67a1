// atlapprox: check formulas on model files, print translations, validate
// models, generate benchmark models and run the benchmark sweeps.
//
// Exit codes: 0 conclusive (or success), 2 verdict Unknown, 1 error.

#include <atlapprox/atlapprox.hpp>

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace atlapprox;

namespace
{
  /// ATLAPPROX_BUDGET overrides both search budgets.
  std::optional<std::size_t> env_budget()
  {
    const char* v = std::getenv("ATLAPPROX_BUDGET");
    if (!v || !*v)
      return std::nullopt;
    char* end = nullptr;
    const unsigned long long n = std::strtoull(v, &end, 10);
    if (*end || n == 0)
      throw Error(std::string("ATLAPPROX_BUDGET must be a positive integer, got '") + v + "'");
    return static_cast<std::size_t>(n);
  }

  void apply_budget(EvalOptions& e, ExactOptions& x)
  {
    if (auto b = env_budget())
      e.assignment_budget = x.budget = *b;
  }

  Model load_valid(const std::string& path)
  {
    Model m = load_model(path);
    const auto rep = validate(m);
    if (!rep.ok())
      {
        std::ostringstream out;
        out << path << ": invalid model";
        for (const auto& v : rep.violations)
          out << "\n  " << v.message;
        throw ModelError(out.str());
      }
    return m;
  }

  std::string states_of(const Model& m, const StateSet& s)
  {
    std::string out = "{";
    bool first = true;
    for (state_id q : s)
      {
        out += (first ? "" : ", ") + m.state_name(q);
        first = false;
      }
    return out + "}";
  }

  // ---------------------------------------------------------------------

  struct CheckArgs
  {
    std::string model, formula, state, semantics = "subjective";
    bool exact = false, all_states = false;
  };

  int cmd_check(const CheckArgs& a)
  {
    const Model m = load_valid(a.model);
    const Formula g = parse(a.formula);
    const state_id q = a.state.empty() ? state_id{0} : m.state(a.state);
    EvalOptions eo;
    ExactOptions xo;
    xo.subjective = a.semantics == "subjective";
    apply_budget(eo, xo);

    std::cout << "formula: " << to_string(g) << "\nstate:   " << m.state_name(q) << '\n';
    if (!is_atl_ir(g))
      {
        // not an ATL_ir formula: evaluate it as it stands
        Evaluator ev(m, eo);
        const StateSet s = ev.eval(g);
        std::cout << "value:   " << (s.contains(q) ? "true" : "false") << '\n';
        if (a.all_states)
          std::cout << "states:  " << states_of(m, s) << '\n';
        return 0;
      }

    const Verdict v = verdict(m, q, g, {eo});
    std::cout << "lower:   " << (v.lower ? "true" : "false") << "  (" << v.lower_iterations
              << " iterations, " << v.lower_seconds << " s)\n"
              << "upper:   " << (v.upper ? "true" : "false") << "  (" << v.upper_iterations
              << " iterations, " << v.upper_seconds << " s)\n";
    if (a.all_states)
      std::cout << "lower states: " << states_of(m, Evaluator(m, eo).eval(tr(g))) << '\n'
                << "upper states: " << states_of(m, Evaluator(m, eo).eval(TR(g))) << '\n';
    if (a.exact)
      {
        try
          {
            const StateSet s = check_ir(m, g, xo);
            std::cout << "exact:   " << (s.contains(q) ? "true" : "false") << "  (" << a.semantics
                      << ")\n";
            if (a.all_states)
              std::cout << "exact states: " << states_of(m, s) << '\n';
          }
        catch (const BudgetExceeded& e)
          {
            std::cout << "exact:   budget exceeded (" << e.what() << ")\n";
          }
      }
    std::cout << "verdict: " << to_string(v.value) << '\n';
    return v.value == Truth::Unknown ? 2 : 0;
  }

  int cmd_validate(const std::vector<std::string>& files)
  {
    int status = 0;
    for (const auto& path : files)
      {
        try
          {
            const Model m = load_model(path);
            const auto rep = validate(m);
            if (rep.ok())
              std::cout << path << ": ok (" << m.num_states() << " states, " << m.num_agents()
                        << " agents)\n";
            else
              {
                status = 1;
                std::cout << path << ": " << rep.violations.size() << " violation(s)\n";
                for (const auto& v : rep.violations)
                  std::cout << "  " << v.message << '\n';
              }
          }
        catch (const ParseError& e)
          {
            status = 1;
            std::cout << path << ":" << e.what() << '\n';
          }
        catch (const Error& e)
          {
            status = 1;
            std::cout << path << ": " << e.what() << '\n';
          }
      }
    return status;
  }

  int cmd_translate(const std::string& text)
  {
    const Formula g = parse(text);
    std::cout << "formula: " << to_string(g) << '\n'
              << "tr:      " << to_string(tr(g)) << '\n'
              << "TR:      " << to_string(TR(g)) << '\n';
    if (auto r = as_reachability(g); r.goal)
      std::cout << "tr1:     " << to_string(tr1(r.coalition, r.goal)) << '\n'
                << "tr2:     " << to_string(tr2(r.coalition, r.goal)) << '\n'
                << "tr3:     " << to_string(tr3(r.coalition, r.goal)) << '\n';
    return 0;
  }

  // ---------------------------------------------------------------------

  struct BenchArgs
  {
    std::string family;
    std::vector<int> k;
    int n = 2;
    std::size_t seeds = 20;
    std::string formula;
    bool exact = false, compare_tr2 = false, no_timings = false, stretch = false;
    std::string output;
    unsigned jobs = 1;
  };

  int cmd_bench(BenchArgs a)
  {
    SweepOptions opt;
    opt.exact = a.exact;
    opt.compare_tr2 = a.compare_tr2;
    opt.jobs = std::max(1u, a.jobs);
    apply_budget(opt.eval, opt.exact_options);

    ExperimentReport rep;
    if (a.family == "voting")
      {
        if (a.k.empty())
          a.k = {1, 2, 3};
        for (int k : a.k)
          {
            if (k < 1)
              throw Error("--k must be at least 1");
            if (k > 3 && !a.stretch)
              throw Error("voting with k > 3 is a stretch run; pass --stretch");
          }
        std::string f = a.formula.empty() || a.formula == "phi1" ? voting_phi1
          : a.formula == "phi2" ? voting_phi2 : a.formula;
        rep = run_voting(a.k, f, opt);
      }
    else if (a.family == "bridge" || a.family == "bridge-am")
      {
        if (a.k.empty())
          a.k = {a.n};
        if (a.k.size() != 1)
          throw Error("bridge takes a single --k");
        const int k = a.k.front();
        if (k < 1 || k > a.n)
          throw Error("bridge needs 1 <= k <= n");
        if (a.n > 2 && !a.stretch)
          throw Error("bridge with n > 2 is a stretch run; pass --stretch");
        rep = run_bridge(a.n, k, a.seeds, a.family == "bridge-am", opt,
                         a.formula.empty() ? bridge_formula : a.formula);
      }
    else if (a.family == "counterexamples")
      rep = run_counterexamples(opt);
    else
      throw Error("unknown family '" + a.family + "'");

    print_table(std::cout, rep);
    if (!a.output.empty())
      {
        std::ofstream out(a.output);
        if (!out)
          throw Error("cannot write '" + a.output + "'");
        write_csv(out, rep, !a.no_timings);
      }
    return 0;
  }

  struct GenerateArgs
  {
    std::string family, output;
    int k = 1, n = 1;
    std::uint64_t seed = 0;
    RandomParams random;
  };

  int cmd_generate(GenerateArgs a)
  {
    Model m = [&] {
      if (a.family == "m0") return m0();
      if (a.family == "m1") return m1();
      if (a.family == "m2") return m2();
      if (a.family == "m3") return m3();
      if (a.family == "m_vote") return m_vote();
      if (a.family == "voting") return gen_voting({a.k});
      if (a.family == "bridge") return gen_bridge(BridgeInstance{a.n, a.k, a.seed});
      if (a.family == "bridge-am") return gen_bridge_absentminded(BridgeInstance{a.n, a.k, a.seed});
      if (a.family == "random")
        {
          a.random.seed = a.seed;
          return gen_random(a.random);
        }
      throw Error("unknown family '" + a.family + "'");
    }();
    if (a.output.empty())
      write_model(std::cout, m);
    else
      {
        std::ofstream out(a.output);
        if (!out)
          throw Error("cannot write '" + a.output + "'");
        write_model(out, m);
      }
    return 0;
  }
}

int main(int argc, char** argv)
{
  CLI::App app{"Lower and upper approximations of ATL_ir strategic ability"};
  app.require_subcommand(1);

  CheckArgs check;
  auto* c = app.add_subcommand("check", "Evaluate a formula at a state of a model file");
  c->add_option("model", check.model, "Model file")->required();
  c->add_option("formula", check.formula, "Formula")->required();
  c->add_option("--state", check.state, "State (default: first declared)");
  c->add_flag("--exact", check.exact, "Also run the exact ir checker");
  c->add_option("--semantics", check.semantics, "Exact checker mode")
    ->check(CLI::IsMember({"subjective", "objective"}));
  c->add_flag("--all-states", check.all_states, "Print the full satisfying sets");

  std::vector<std::string> files;
  auto* v = app.add_subcommand("validate", "Check model files for well-formedness");
  v->add_option("files", files, "Model files")->required();

  std::string text;
  auto* t = app.add_subcommand("translate", "Print tr, TR (and tr1, tr2, tr3 for reachability)");
  t->add_option("formula", text, "ATL_ir formula")->required();

  BenchArgs bench;
  auto* b = app.add_subcommand("bench", "Run a benchmark sweep");
  b->add_option("family", bench.family, "voting | bridge | bridge-am | counterexamples")
    ->required()
    ->check(CLI::IsMember({"voting", "bridge", "bridge-am", "counterexamples"}));
  b->add_option("--k", bench.k, "Voters (voting, several allowed) or cards per hand (bridge)");
  b->add_option("--n", bench.n, "Ranks per suit (bridge)");
  b->add_option("--seeds", bench.seeds, "Deals per size (bridge)");
  b->add_option("--formula", bench.formula, "phi1 | phi2 | a formula");
  b->add_flag("--exact", bench.exact, "Also run the exact checker");
  b->add_flag("--compare-tr2", bench.compare_tr2, "Also evaluate the tr2 lower bound");
  b->add_option("--output", bench.output, "CSV output file");
  b->add_flag("--no-timings", bench.no_timings, "Leave timing columns empty in the CSV");
  b->add_option("--jobs", bench.jobs, "Instances evaluated in parallel");
  b->add_flag("--stretch", bench.stretch, "Allow the large instances");

  GenerateArgs gen;
  auto* g = app.add_subcommand("generate", "Write a generated model in the model file format");
  g->add_option("family", gen.family, "m0 | m1 | m2 | m3 | m_vote | voting | bridge | bridge-am | random")
    ->required();
  g->add_option("--k", gen.k, "Voters or cards per hand");
  g->add_option("--n", gen.n, "Ranks per suit");
  g->add_option("--seed", gen.seed, "Seed (bridge, random)");
  g->add_option("--states", gen.random.num_states, "Random: states");
  g->add_option("--agents", gen.random.num_agents, "Random: agents");
  g->add_option("--actions", gen.random.num_actions, "Random: actions");
  g->add_option("--block", gen.random.epistemic_block_size, "Random: epistemic block size");
  g->add_option("--output", gen.output, "Output file (default: stdout)");

  CLI11_PARSE(app, argc, argv);

  try
    {
      if (*c)
        return cmd_check(check);
      if (*v)
        return cmd_validate(files);
      if (*t)
        return cmd_translate(text);
      if (*b)
        return cmd_bench(bench);
      if (*g)
        return cmd_generate(gen);
    }
  catch (const BudgetExceeded& e)
    {
      std::cerr << "error: " << e.what() << " (raise ATLAPPROX_BUDGET to allow more)\n";
      return 1;
    }
  catch (const ParseError& e)
    {
      std::cerr << "parse error: " << e.what() << '\n';
      return 1;
    }
  catch (const std::exception& e)
    {
      std::cerr << "error: " << e.what() << '\n';
      return 1;
    }
  return 1;
}
