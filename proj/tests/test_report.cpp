#include <atlapprox/report.hpp>

#include <gtest/gtest.h>

#include <sstream>

using namespace atlapprox;

TEST(Csv, HeaderAndRoundTrip)
{
  ExperimentReport rep;
  ReportRow a;
  a.family = "bridge";
  a.params = "n=2;k=2;seed=0";
  a.states = 301;
  a.lower = a.upper = true;
  a.lower_iterations = 4;
  a.tr2 = false;
  a.exact = true;
  a.gen_seconds = 0.25;
  ReportRow b;
  b.family = "odd, \"quoted\"";
  b.index = 1;
  b.upper = true;
  b.note = "budget";
  b.lower_seconds = 1e-7;
  rep.rows = {a, b};

  const std::string text = to_csv(rep);
  EXPECT_EQ(text.substr(0, text.find('\n')), csv_header);
  EXPECT_EQ(read_csv(text), rep);
  EXPECT_NE(text.find(",true,True,"), std::string::npos);  // match, verdict

  ExperimentReport untimed = rep;
  for (auto& r : untimed.rows)
    r.gen_seconds = r.lower_seconds = r.upper_seconds = r.exact_seconds = 0;
  EXPECT_EQ(read_csv(to_csv(rep, false)), untimed);
}

TEST(Csv, RejectsGarbage)
{
  EXPECT_THROW(read_csv(std::string("nope\n")), ParseError);
  EXPECT_THROW(read_csv(std::string(csv_header) + "\nbridge,x,,1,true,0,true,0,true,True,,,,,,,,\n"),
               ParseError);
}

TEST(Report, Rates)
{
  ExperimentReport rep;
  ReportRow r;
  r.lower = r.upper = true;
  r.tr2 = false;
  rep.rows.push_back(r);
  r.lower = false;
  rep.rows.push_back(r);
  EXPECT_DOUBLE_EQ(rep.match_rate(), 0.5);
  EXPECT_DOUBLE_EQ(rep.upper_true_rate(), 1.0);
  EXPECT_DOUBLE_EQ(rep.tr2_true_rate(), 0.0);
  EXPECT_DOUBLE_EQ(rep.exact_true_rate(), 0.0);  // never defined
  EXPECT_EQ(rep.rows[1].verdict(), Truth::Unknown);
}

TEST(Sweeps, Counterexamples)
{
  const ExperimentReport rep = run_counterexamples();
  ASSERT_EQ(rep.rows.size(), 4u);
  EXPECT_EQ(rep.rows[0].tr1, true);
  EXPECT_EQ(rep.rows[0].exact, false);
  EXPECT_EQ(rep.rows[1].tr2, true);
  EXPECT_EQ(rep.rows[1].exact, false);
  EXPECT_EQ(rep.rows[2].verdict(), Truth::True);
  EXPECT_EQ(rep.rows[3].verdict(), Truth::Unknown);
  EXPECT_EQ(rep.rows[3].exact, true);
}

TEST(Sweeps, VotingBoundsMatch)
{
  SweepOptions o;
  o.exact = true;
  const ExperimentReport rep = run_voting({1, 2}, voting_phi1, o);
  ASSERT_EQ(rep.rows.size(), 2u);
  EXPECT_EQ(rep.rows[1].states, 225u);
  EXPECT_DOUBLE_EQ(rep.match_rate(), 1.0);
  // one voter is small enough for the exact search; two are over budget
  EXPECT_EQ(rep.rows[0].exact, rep.rows[0].lower);
  EXPECT_EQ(rep.rows[1].note, "budget");
  EXPECT_FALSE(rep.rows[1].exact);
}

TEST(Sweeps, DeterministicAcrossJobCounts)
{
  SweepOptions one, four;
  one.compare_tr2 = four.compare_tr2 = true;
  four.jobs = 4;
  const std::string a = to_csv(run_bridge(1, 1, 6, false, one), false);
  const std::string b = to_csv(run_bridge(1, 1, 6, false, four), false);
  const std::string c = to_csv(run_bridge(1, 1, 6, false, four), false);
  EXPECT_EQ(a, b);
  EXPECT_EQ(b, c);
  const ExperimentReport rep = read_csv(a);
  for (std::size_t i = 0; i < rep.rows.size(); ++i)
    EXPECT_EQ(rep.rows[i].index, i);
}

TEST(Sweeps, TableSummary)
{
  std::ostringstream out;
  print_table(out, run_voting({1}, voting_phi1));
  EXPECT_NE(out.str().find("match 100.0%"), std::string::npos) << out.str();
}
