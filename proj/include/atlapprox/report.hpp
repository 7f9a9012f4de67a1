#pragma once

// Experiment sweeps and their reports: one row per instance, CSV in and
// out, and a console table laid out like the result tables (lower bound,
// upper bound, match).

#include <atomic>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <exception>
#include <iomanip>
#include <istream>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "bench.hpp"
#include "errors.hpp"
#include "exact.hpp"
#include "fixpoint.hpp"
#include "parser.hpp"
#include "translate.hpp"

namespace atlapprox
{
  struct ReportRow
  {
    std::string family;
    std::size_t index = 0;
    std::string params;  // "k=3", "n=2;k=2;seed=7", model name, ...
    std::size_t states = 0;
    bool lower = false;
    std::size_t lower_iterations = 0;
    bool upper = false;
    std::size_t upper_iterations = 0;
    std::optional<bool> tr1;    // extra lower bounds, when requested
    std::optional<bool> tr2;
    std::optional<bool> exact;  // empty when not run or over budget
    std::string note;           // e.g. "budget" when the exact check gave up
    // timings last: not part of the determinism contract
    double gen_seconds = 0;
    double lower_seconds = 0;
    double upper_seconds = 0;
    double exact_seconds = 0;

    bool match() const { return lower == upper; }
    Truth verdict() const { return combine(lower, upper); }

    bool operator==(const ReportRow&) const = default;
  };

  struct ExperimentReport
  {
    std::vector<ReportRow> rows;

    double match_rate() const
    {
      return rate([](const ReportRow& r) { return std::optional<bool>(r.match()); });
    }
    double lower_true_rate() const
    {
      return rate([](const ReportRow& r) { return std::optional<bool>(r.lower); });
    }
    double upper_true_rate() const
    {
      return rate([](const ReportRow& r) { return std::optional<bool>(r.upper); });
    }
    double tr2_true_rate() const { return rate([](const ReportRow& r) { return r.tr2; }); }
    double exact_true_rate() const { return rate([](const ReportRow& r) { return r.exact; }); }

    bool operator==(const ExperimentReport&) const = default;

  private:
    // share of rows where f is true, among rows where it is defined
    template <typename F>
    double rate(F&& f) const
    {
      std::size_t defined = 0, yes = 0;
      for (const auto& r : rows)
        if (auto v = f(r))
          {
            ++defined;
            yes += *v;
          }
      return defined ? static_cast<double>(yes) / static_cast<double>(defined) : 0.0;
    }
  };

  // ---------------------------------------------------------------------
  // CSV

  inline constexpr const char* csv_header =
    "family,index,params,states,lower,lower_iterations,upper,upper_iterations,match,verdict,"
    "tr1,tr2,exact,note,gen_seconds,lower_seconds,upper_seconds,exact_seconds";

  namespace detail
  {
    inline std::string csv_bool(std::optional<bool> b) { return b ? (*b ? "true" : "false") : ""; }

    inline std::string csv_double(double x)
    {
      char buf[64];
      auto r = std::to_chars(buf, buf + sizeof buf, x);
      return std::string(buf, r.ptr);
    }

    inline std::string csv_field(const std::string& s)
    {
      if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
      std::string out = "\"";
      for (char c : s)
        out += c == '"' ? std::string("\"\"") : std::string(1, c);
      return out + "\"";
    }

    inline std::vector<std::string> csv_split(const std::string& line)
    {
      std::vector<std::string> out(1);
      bool quoted = false;
      for (std::size_t i = 0; i < line.size(); ++i)
        {
          const char c = line[i];
          if (quoted)
            {
              if (c == '"' && i + 1 < line.size() && line[i + 1] == '"')
                out.back() += '"', ++i;
              else if (c == '"')
                quoted = false;
              else
                out.back() += c;
            }
          else if (c == '"')
            quoted = true;
          else if (c == ',')
            out.emplace_back();
          else if (c != '\r')
            out.back() += c;
        }
      return out;
    }

    inline std::optional<bool> parse_bool(const std::string& s, std::size_t line)
    {
      if (s.empty())
        return std::nullopt;
      if (s == "true")
        return true;
      if (s == "false")
        return false;
      throw ParseError("expected true, false or nothing, got '" + s + "'", line, 1);
    }

    template <typename T>
    T parse_number(const std::string& s, std::size_t line)
    {
      T v{};
      auto r = std::from_chars(s.data(), s.data() + s.size(), v);
      if (r.ec != std::errc{} || r.ptr != s.data() + s.size())
        throw ParseError("bad number '" + s + "'", line, 1);
      return v;
    }
  }

  /// With `timings` false the timing columns are written empty, so
  /// reruns with the same seeds give byte-identical files.
  inline void write_csv(std::ostream& out, const ExperimentReport& rep, bool timings = true)
  {
    using namespace detail;
    out << csv_header << '\n';
    for (const auto& r : rep.rows)
      {
        out << csv_field(r.family) << ',' << r.index << ',' << csv_field(r.params) << ','
            << r.states << ',' << csv_bool(r.lower) << ',' << r.lower_iterations << ','
            << csv_bool(r.upper) << ',' << r.upper_iterations << ',' << csv_bool(r.match()) << ','
            << to_string(r.verdict()) << ',' << csv_bool(r.tr1) << ',' << csv_bool(r.tr2) << ','
            << csv_bool(r.exact) << ',' << csv_field(r.note);
        for (double t : {r.gen_seconds, r.lower_seconds, r.upper_seconds, r.exact_seconds})
          out << ',' << (timings ? csv_double(t) : "");
        out << '\n';
      }
  }

  inline std::string to_csv(const ExperimentReport& rep, bool timings = true)
  {
    std::ostringstream out;
    write_csv(out, rep, timings);
    return out.str();
  }

  inline ExperimentReport read_csv(std::istream& in)
  {
    using namespace detail;
    ExperimentReport rep;
    std::string line;
    std::size_t lineno = 0;
    if (!std::getline(in, line) || (++lineno, line != csv_header && line != std::string(csv_header) + "\r"))
      throw ParseError("missing or unexpected CSV header", 1, 1);
    while (std::getline(in, line))
      {
        ++lineno;
        if (line.empty())
          continue;
        auto f = csv_split(line);
        if (f.size() != 18)
          throw ParseError("expected 18 fields, got " + std::to_string(f.size()), lineno, 1);
        ReportRow r;
        r.family = f[0];
        r.index = parse_number<std::size_t>(f[1], lineno);
        r.params = f[2];
        r.states = parse_number<std::size_t>(f[3], lineno);
        r.lower = parse_bool(f[4], lineno).value_or(false);
        r.lower_iterations = parse_number<std::size_t>(f[5], lineno);
        r.upper = parse_bool(f[6], lineno).value_or(false);
        r.upper_iterations = parse_number<std::size_t>(f[7], lineno);
        if (parse_bool(f[8], lineno) != r.match())
          throw ParseError("match column disagrees with lower/upper", lineno, 1);
        r.tr1 = parse_bool(f[10], lineno);
        r.tr2 = parse_bool(f[11], lineno);
        r.exact = parse_bool(f[12], lineno);
        r.note = f[13];
        double* t[] = {&r.gen_seconds, &r.lower_seconds, &r.upper_seconds, &r.exact_seconds};
        for (int i = 0; i < 4; ++i)
          *t[i] = f[14 + i].empty() ? 0.0 : parse_number<double>(f[14 + i], lineno);
        rep.rows.push_back(std::move(r));
      }
    return rep;
  }

  inline ExperimentReport read_csv(const std::string& text)
  {
    std::istringstream in(text);
    return read_csv(in);
  }

  /// Console table: one line per row and a summary line.
  inline void print_table(std::ostream& out, const ExperimentReport& rep)
  {
    auto b = [](std::optional<bool> v) { return v ? (*v ? "T" : "F") : "-"; };
    out << std::left << std::setw(16) << "family" << std::setw(22) << "instance" << std::right
        << std::setw(9) << "#states" << std::setw(9) << "tgen" << "  | " << std::setw(5) << "lower"
        << std::setw(7) << "#iter" << std::setw(9) << "time" << "  | " << std::setw(5) << "upper"
        << std::setw(9) << "time" << "  | " << std::setw(5) << "match" << std::setw(9)
        << "verdict" << std::setw(5) << "tr1" << std::setw(5) << "tr2" << std::setw(7) << "exact"
        << '\n';
    out << std::fixed << std::setprecision(3);
    for (const auto& r : rep.rows)
      out << std::left << std::setw(16) << r.family << std::setw(22) << r.params << std::right
          << std::setw(9) << r.states << std::setw(9) << r.gen_seconds << "  | " << std::setw(5)
          << b(r.lower) << std::setw(7) << r.lower_iterations << std::setw(9) << r.lower_seconds
          << "  | " << std::setw(5) << b(r.upper) << std::setw(9) << r.upper_seconds << "  | "
          << std::setw(5) << b(r.match()) << std::setw(9) << to_string(r.verdict()) << std::setw(5)
          << b(r.tr1) << std::setw(5) << b(r.tr2) << std::setw(7)
          << (r.note.empty() ? b(r.exact) : r.note.c_str()) << '\n';
    out << std::setprecision(1) << "rows " << rep.rows.size() << ", match "
        << 100 * rep.match_rate() << "%, lower true " << 100 * rep.lower_true_rate()
        << "%, upper true " << 100 * rep.upper_true_rate() << '%';
    if (std::any_of(rep.rows.begin(), rep.rows.end(), [](const ReportRow& r) { return r.tr2.has_value(); }))
      out << ", tr2 true " << 100 * rep.tr2_true_rate() << '%';
    if (std::any_of(rep.rows.begin(), rep.rows.end(), [](const ReportRow& r) { return r.exact.has_value(); }))
      out << ", exact true " << 100 * rep.exact_true_rate() << '%';
    out << '\n';
    out.unsetf(std::ios::floatfield);
  }

  // ---------------------------------------------------------------------
  // Sweeps

  struct SweepOptions
  {
    bool exact = false;
    bool compare_tr1 = false;
    bool compare_tr2 = false;
    unsigned jobs = 1;
    EvalOptions eval;
    ExactOptions exact_options;
  };

  namespace detail
  {
    inline double seconds_since(std::chrono::steady_clock::time_point t0)
    {
      return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }

    /// Bounds (and the optional extras) of `g` at state q.
    inline void fill_row(ReportRow& r, const Model& m, state_id q, const Formula& g,
                         const SweepOptions& opt)
    {
      r.states = m.num_states();
      const Verdict v = verdict(m, q, g, {opt.eval});
      r.lower = v.lower;
      r.upper = v.upper;
      r.lower_iterations = v.lower_iterations;
      r.upper_iterations = v.upper_iterations;
      r.lower_seconds = v.lower_seconds;
      r.upper_seconds = v.upper_seconds;
      if (opt.compare_tr1 || opt.compare_tr2)
        {
          const auto goal = as_reachability(g);
          if (!goal.goal)
            throw FormulaError("tr1/tr2 comparison needs a reachability formula <<A>> F goal");
          if (opt.compare_tr1)
            r.tr1 = Evaluator(m, opt.eval).eval(tr1(goal.coalition, goal.goal)).contains(q);
          if (opt.compare_tr2)
            r.tr2 = Evaluator(m, opt.eval).eval(tr2(goal.coalition, goal.goal)).contains(q);
        }
      if (opt.exact)
        {
          const auto t0 = std::chrono::steady_clock::now();
          try
            {
              r.exact = check_ir(m, g, opt.exact_options).contains(q);
            }
          catch (const BudgetExceeded&)
            {
              r.note = "budget";
            }
          r.exact_seconds = seconds_since(t0);
        }
    }

    /// Runs job(i) for i < n on up to `jobs` threads; rows keep index order.
    template <typename Job>
    ExperimentReport run_indexed(std::size_t n, unsigned jobs, Job&& job)
    {
      ExperimentReport rep;
      rep.rows.resize(n);
      std::atomic<std::size_t> next{0};
      std::exception_ptr failure;
      std::mutex failure_mutex;
      auto worker = [&] {
        for (std::size_t i; (i = next++) < n;)
          {
            try
              {
                rep.rows[i] = job(i);
              }
            catch (...)
              {
                std::lock_guard lock(failure_mutex);
                if (!failure)
                  failure = std::current_exception();
              }
          }
      };
      const unsigned threads = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(n)));
      if (threads == 1)
        worker();
      else
        {
          std::vector<std::thread> pool;
          for (unsigned t = 0; t < threads; ++t)
            pool.emplace_back(worker);
          for (auto& t : pool)
            t.join();
        }
      if (failure)
        std::rethrow_exception(failure);
      return rep;
    }
  }

  inline const char* voting_phi1 = "<<c>> G ((finish1 & !pun1) -> vote1_1)";
  inline const char* voting_phi2 = "<<v1>> F (finish1 & !pun1 & !vote1_1)";

  /// One row per k in `ks`, evaluated at the initial state.
  inline ExperimentReport run_voting(const std::vector<int>& ks, const std::string& formula,
                                     const SweepOptions& opt = {})
  {
    const Formula g = parse(formula);
    return detail::run_indexed(ks.size(), opt.jobs, [&](std::size_t i) {
      ReportRow r;
      r.family = "voting";
      r.index = i;
      r.params = "k=" + std::to_string(ks[i]);
      const auto t0 = std::chrono::steady_clock::now();
      const Model m = gen_voting({ks[i]});
      r.gen_seconds = detail::seconds_since(t0);
      detail::fill_row(r, m, 0, g, opt);
      return r;
    });
  }

  inline constexpr const char* bridge_formula = "<<S>> F win";

  /// Seeds 0..seeds-1 for each (n, k); `absentminded` picks the variant.
  inline ExperimentReport run_bridge(int n, int k, std::size_t seeds, bool absentminded,
                                     const SweepOptions& opt = {},
                                     const std::string& formula = bridge_formula)
  {
    const Formula g = parse(formula);
    return detail::run_indexed(seeds, opt.jobs, [&](std::size_t i) {
      ReportRow r;
      r.family = absentminded ? "bridge-am" : "bridge";
      r.index = i;
      r.params = "n=" + std::to_string(n) + ";k=" + std::to_string(k) + ";seed=" + std::to_string(i);
      const auto t0 = std::chrono::steady_clock::now();
      const BridgeInstance inst{n, k, i};
      const Model m = absentminded ? gen_bridge_absentminded(inst) : gen_bridge(inst);
      r.gen_seconds = detail::seconds_since(t0);
      // all beginning states look alike to S, and every bound is
      // constant on S's blocks, so the first one stands for the deal
      detail::fill_row(r, m, 0, g, opt);
      return r;
    });
  }

  /// The four counterexample structures with <<A>> F p at q0, where A is
  /// {1,2} on the two-agent model and {1} elsewhere.
  inline ExperimentReport run_counterexamples(SweepOptions opt = {})
  {
    opt.compare_tr1 = opt.compare_tr2 = opt.exact = true;
    struct Case
    {
      const char* name;
      Model (*make)();
      const char* formula;
    };
    const Case cases[] = {
      {"m0", m0, "<<1>> F p"},
      {"m1", m1, "<<1,2>> F p"},
      {"m2", m2, "<<1>> F p"},
      {"m3", m3, "<<1>> F p"},
    };
    ExperimentReport rep;
    for (std::size_t i = 0; i < std::size(cases); ++i)
      {
        ReportRow r;
        r.family = "counterexamples";
        r.index = i;
        r.params = cases[i].name;
        const auto t0 = std::chrono::steady_clock::now();
        const Model m = cases[i].make();
        r.gen_seconds = detail::seconds_since(t0);
        detail::fill_row(r, m, m.state("q0"), parse(cases[i].formula), opt);
        rep.rows.push_back(std::move(r));
      }
    return rep;
  }
}
