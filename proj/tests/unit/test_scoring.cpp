#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "rdlp/error.hpp"
#include "rdlp/scoring.hpp"

using namespace rdlp;
namespace ms = rdlp::measures;

namespace {

RunMeasures run(std::string id, double sc, bool zp, double et, double ep, double pc, double ewd, double emo,
                double etot, double epk) {
  RunMeasures r;
  r.run_id = std::move(id);
  r.values = {{std::string(ms::kSensibleCount), sc}, {std::string(ms::kZeroProfile), zp},
              {std::string(ms::kErrorTotal), et},    {std::string(ms::kErrorPeak), ep},
              {std::string(ms::kPeakCoincidence), pc}, {std::string(ms::kEntropyWeekday), ewd},
              {std::string(ms::kEntropyMonth), emo}, {std::string(ms::kEntropyTotal), etot},
              {std::string(ms::kEntropyPeak), epk}};
  return r;
}

const RunScore& find(const std::vector<RunScore>& scores, const std::string& id) {
  for (const auto& s : scores)
    if (s.run_id == id) return s;
  throw std::runtime_error("missing " + id);
}

// Hand-computed table (weights 2 1 6 6 3 4 4 5 5):
//        sc  zp  et   ep  pc   ewd emo etot epk | total
//   A    2   1   1.5  2   1.5  2   2   2    2   | 66.5
//   B    1   3   3    1   1.5  3   1   1    3   | 69.5
//   C    3   1   1.5  3   3    1   3   3    1   | 79
std::vector<RunMeasures> spreadsheet_runs() {
  return {run("C", 40, true, 10, 25, 0.6, 1.5, 3.5, 6.0, 5.0),
          run("A", 50, true, 10, 20, 0.8, 2.0, 3.0, 5.0, 5.5),
          run("B", 60, false, 12, 15, 0.8, 2.5, 2.0, 4.0, 6.0)};
}

}  // namespace

TEST(DefaultMatrix, WeightsAndDirections) {
  const auto m = default_matrix();
  EXPECT_EQ(m.size(), 9u);
  EXPECT_EQ(m.total_weight(), 36);
  const std::vector<std::pair<std::string_view, int>> expected{
      {ms::kSensibleCount, 2}, {ms::kZeroProfile, 1},     {ms::kErrorTotal, 6},
      {ms::kErrorPeak, 6},     {ms::kPeakCoincidence, 3}, {ms::kEntropyWeekday, 4},
      {ms::kEntropyMonth, 4},  {ms::kEntropyTotal, 5},    {ms::kEntropyPeak, 5}};
  for (std::size_t i = 0; i < expected.size(); ++i) {
    EXPECT_EQ(m.measures()[i].name, expected[i].first);
    EXPECT_EQ(m.measures()[i].weight, expected[i].second);
  }
  EXPECT_EQ(m.find(ms::kZeroProfile)->direction, Direction::boolean_good);
  EXPECT_EQ(m.find(ms::kPeakCoincidence)->direction, Direction::higher_better);
  EXPECT_EQ(m.find(ms::kSensibleCount)->direction, Direction::higher_better);
  EXPECT_EQ(m.find(ms::kErrorTotal)->direction, Direction::lower_better);
  EXPECT_EQ(m.find(ms::kEntropyPeak)->direction, Direction::lower_better);
}

TEST(Matrix, Validation) {
  EXPECT_THROW(ScoringMatrix({{"a", 0, Direction::lower_better}}), ConfigError);
  EXPECT_THROW(ScoringMatrix({{"a", 1, Direction::lower_better}, {"a", 2, Direction::lower_better}}), ConfigError);
  EXPECT_THROW(ScoringMatrix(std::vector<Measure>{}), ConfigError);
  EXPECT_EQ(default_matrix().with_weight(0, 7).measures()[0].weight, 7);
  for (auto d : {Direction::lower_better, Direction::higher_better, Direction::boolean_good})
    EXPECT_EQ(parse_direction(to_string(d)), d);
}

TEST(ScoreRuns, SpreadsheetOracle) {
  const auto scores = score_runs(spreadsheet_runs(), default_matrix());
  ASSERT_EQ(scores.size(), 3u);
  EXPECT_EQ(scores[0].run_id, "A");
  EXPECT_EQ(scores[1].run_id, "B");
  EXPECT_EQ(scores[2].run_id, "C");
  EXPECT_DOUBLE_EQ(*find(scores, "A").total, 66.5);
  EXPECT_DOUBLE_EQ(*find(scores, "B").total, 69.5);
  EXPECT_DOUBLE_EQ(*find(scores, "C").total, 79.0);
  EXPECT_EQ(find(scores, "B").ranks, (std::vector<double>{1, 3, 3, 1, 1.5, 3, 1, 1, 3}));
  EXPECT_EQ(find(scores, "C").ranks, (std::vector<double>{3, 1, 1.5, 3, 3, 1, 3, 3, 1}));
  EXPECT_EQ(scores[0].final_rank, 1);
  EXPECT_EQ(scores[2].final_rank, 3);
}

TEST(ScoreRuns, BestEverywhereScoresTotalWeight) {
  auto runs = spreadsheet_runs();
  runs.push_back(run("best", 99, true, 1, 1, 1.0, 0.1, 0.1, 0.1, 0.1));
  const auto scores = score_runs(runs, default_matrix());
  EXPECT_EQ(scores[0].run_id, "best");
  EXPECT_DOUBLE_EQ(*scores[0].total, 36.0);
}

TEST(ScoreRuns, IdenticalRunsTie) {
  const std::vector runs{run("x", 1, true, 1, 1, 1, 1, 1, 1, 1), run("y", 1, true, 1, 1, 1, 1, 1, 1, 1)};
  const auto scores = score_runs(runs, default_matrix());
  EXPECT_EQ(*scores[0].total, *scores[1].total);
  EXPECT_EQ(scores[0].final_rank, scores[1].final_rank);
  EXPECT_EQ(scores[0].run_id, "x");  // ties ordered by id
}

TEST(ScoreRuns, DisqualifiedRunsLast) {
  auto runs = spreadsheet_runs();
  RunMeasures dq;
  dq.run_id = "0-dq";
  dq.disqualified = true;
  dq.reason = "no cluster above threshold";
  runs.push_back(dq);
  const auto scores = score_runs(runs, default_matrix());
  ASSERT_EQ(scores.size(), 4u);
  EXPECT_EQ(scores[3].run_id, "0-dq");
  EXPECT_TRUE(scores[3].disqualified);
  EXPECT_FALSE(scores[3].total);
  EXPECT_EQ(scores[3].final_rank, 4);
  EXPECT_DOUBLE_EQ(*find(scores, "A").total, 66.5);
}

TEST(ScoreRuns, Errors) {
  EXPECT_THROW(score_runs(std::vector<RunMeasures>{}, default_matrix()), ParameterError);
  auto runs = spreadsheet_runs();
  runs[0].values.erase(std::string(ms::kEntropyMonth));
  EXPECT_THROW(score_runs(runs, default_matrix()), ParameterError);
}

TEST(ScoreRuns, InvariantUnderMonotoneTransform) {
  const auto base = score_runs(spreadsheet_runs(), default_matrix());
  auto runs = spreadsheet_runs();
  for (auto& r : runs) {
    auto& v = std::get<double>(r.values.at(std::string(ms::kErrorPeak)));
    v = std::exp(v / 3.0) + 7.0;
  }
  const auto moved = score_runs(runs, default_matrix());
  for (std::size_t i = 0; i < base.size(); ++i) {
    EXPECT_EQ(moved[i].run_id, base[i].run_id);
    EXPECT_EQ(*moved[i].total, *base[i].total);
  }
}

TEST(ScoreRuns, AddingAStrictlyWorseRunChangesNoExistingTotal) {
  const auto base = score_runs(spreadsheet_runs(), default_matrix());
  auto runs = spreadsheet_runs();
  runs.push_back(run("worst", 0, false, 1e9, 1e9, -1, 9, 9, 9, 9));
  const auto more = score_runs(runs, default_matrix());
  EXPECT_EQ(more.back().run_id, "worst");
  for (std::size_t i = 0; i < base.size(); ++i) {
    EXPECT_EQ(more[i].run_id, base[i].run_id);
    EXPECT_EQ(*more[i].total, *base[i].total);
  }
}

TEST(ScoreRuns, EqualWeightsGiveWeightTimesRankSum) {
  const auto defaults = default_matrix();
  std::vector<Measure> equal;
  for (const auto& m : defaults.measures()) equal.push_back({m.name, 3, m.direction});
  const ScoringMatrix matrix(equal);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<RunMeasures> runs;
  for (int i = 0; i < 6; ++i)
    runs.push_back(run("r" + std::to_string(i), u(rng), u(rng) < 0.5, u(rng), u(rng), u(rng), u(rng), u(rng),
                       u(rng), u(rng)));
  for (const auto& s : score_runs(runs, matrix)) {
    double sum = 0.0;
    for (double r : s.ranks) sum += r;
    EXPECT_DOUBLE_EQ(*s.total, 3.0 * sum);
  }
}

TEST(WeightSensitivity, PerturbsEveryWeightWithinBounds) {
  const auto runs = spreadsheet_runs();
  const auto cases = weight_sensitivity(runs, default_matrix());
  // zero_profile has weight 1 and can only move up
  EXPECT_EQ(cases.size(), 17u);
  for (const auto& c : cases) {
    EXPECT_GE(c.weight, 1);
    EXPECT_EQ(c.order.size(), 3u);
    EXPECT_EQ(c.top_changed, c.order.front() != "A");
  }
}
