#include <gtest/gtest.h>

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <set>

#include "rdlp/error.hpp"
#include "rdlp/plots.hpp"
#include "rdlp/results.hpp"
#include "rdlp/runner.hpp"

using namespace rdlp;
namespace fs = std::filesystem;

namespace {

SyntheticSpec small_spec() {
  SyntheticSpec spec;
  spec.n_households = 12;
  spec.days = 10;
  spec.rng_seed = 21;
  Archetype zero{"zero", {}, 1.0, 1.0, 0.0};
  Archetype morning{"morning", {}, 1.0, 1.5, 0.05};
  morning.shape.fill(0.3);
  morning.shape[7] = 3.0;
  Archetype evening{"evening", {}, 2.0, 3.0, 0.05};
  evening.shape.fill(0.3);
  evening.shape[19] = 3.0;
  spec.archetypes = {zero, morning, evening};
  return spec;
}

ExperimentConfig small_config() {
  ExperimentConfig c;
  c.dataset.synthetic = small_spec();
  c.usability.threshold = 5;
  c.n_bins = 2;
  c.amc = AmcBinning{{0.0, 1.0}, 1000.0};
  c.experiments = {
      {"plain", true, PreBinning::none, {{Algorithm::kmeans, {2, 3}, {}}, {Algorithm::som, {}, {2}}}, {}},
      {"binned", false, PreBinning::integral_kmeans, {{Algorithm::kmeans, {2, 3, 4}, {}}}, {}},
  };
  return c;
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("rdlp_test_" + name);
  fs::remove_all(dir);
  return dir;
}

}  // namespace

TEST(RunId, Format) {
  EXPECT_EQ(make_run_id("exp2", NormalisationMethod::unit_norm, Algorithm::som_kmeans, GridPoint{6, 3}, 4),
            "exp2-unit_norm-som_kmeans-s3-m6-seed4");
  EXPECT_EQ(make_run_id("e", NormalisationMethod::none, Algorithm::kmeans, GridPoint{5, 0}, 0), "e-none-kmeans-m5-seed0");
  EXPECT_EQ(make_run_id("e", NormalisationMethod::none, Algorithm::kmeans, std::nullopt, 1), "e-none-kmeans-seed1");
}

TEST(RunGrid, SingleParameterGivesOneRecord) {
  auto c = small_config();
  c.experiments = {{"one", true, PreBinning::none, {{Algorithm::kmeans, {3}, {}}}, {}}};
  const auto data = load_dataset(c.dataset);
  const auto records = run_grid(c, data);
  ASSERT_EQ(records.size(), 1u);
  const auto& r = records[0];
  EXPECT_EQ(r.status, RunStatus::ok) << r.error;
  ASSERT_TRUE(r.ci);
  EXPECT_EQ(r.n_total, data.profiles.size());
  EXPECT_EQ(r.labels.size(), data.profiles.size());
  EXPECT_EQ(std::accumulate(r.cluster_sizes.begin(), r.cluster_sizes.end(), std::size_t{0}), r.n_total);
  ASSERT_EQ(r.bins.size(), 1u);
  EXPECT_NEAR(*r.ci, std::log(r.bins[0].quant.ix), 1e-12);
  for (std::size_t k = 0; k < r.n_clusters(); ++k) EXPECT_EQ(r.rdlps[k].has_value(), r.cluster_sizes[k] > 0);
}

TEST(RunGrid, RecordsPerExperimentShapeAndUniqueIds) {
  const auto c = small_config();
  const auto data = load_dataset(c.dataset);
  const auto records = run_grid(c, data);
  // plain: kmeans m2, m3, som s2; binned: one composite record
  ASSERT_EQ(records.size(), 4u);
  std::set<std::string> ids;
  for (const auto& r : records) ids.insert(r.run_id);
  EXPECT_EQ(ids.size(), records.size());
  EXPECT_EQ(records[3].run_id, "binned-unit_norm-kmeans-seed0");

  const auto& binned = records[3];
  ASSERT_EQ(binned.status, RunStatus::ok) << binned.error;
  ASSERT_EQ(binned.bins.size(), 2u);
  double weighted = 0.0;
  for (const auto& b : binned.bins) {
    ASSERT_EQ(b.trials.size(), 3u);
    double best = std::numeric_limits<double>::infinity();
    for (const auto& t : b.trials)
      if (t.usable()) best = std::min(best, t.quant->ix);
    EXPECT_EQ(b.quant.ix, best);
    weighted += static_cast<double>(b.rows.size()) / static_cast<double>(binned.n_total) * b.quant.ix;
  }
  EXPECT_NEAR(*binned.ci, std::log(weighted), 1e-12);
  // zeros dropped: zero-archetype rows are not clustered
  for (std::size_t i = 0; i < data.profiles.size(); ++i)
    EXPECT_EQ(binned.labels[i] < 0, data.archetypes[i] == 0);
  // global cluster ids are unique across bins
  std::set<int> seen;
  for (const auto& b : binned.bins)
    for (int l : b.labels) seen.insert(b.cluster_offset + l);
  EXPECT_LE(seen.size(), binned.n_clusters());
}

TEST(RunGrid, FailuresAreRecordedNotThrown) {
  auto c = small_config();
  c.experiments = {{"bad", true, PreBinning::none, {{Algorithm::kmeans, {2, 500}, {}}}, {}}};
  const auto records = run_grid(c, load_dataset(c.dataset));
  ASSERT_EQ(records.size(), 2u);
  EXPECT_EQ(records[0].status, RunStatus::ok);
  EXPECT_EQ(records[1].status, RunStatus::failed);
  EXPECT_FALSE(records[1].error.empty());
  EXPECT_FALSE(records[1].ci);
}

TEST(RunGrid, WorkerCountDoesNotChangeResults) {
  auto c = small_config();
  const auto data = load_dataset(c.dataset);
  const auto serial = run_grid(c, data);
  c.workers = 3;
  const auto parallel = run_grid(c, data);
  ASSERT_EQ(serial.size(), parallel.size());
  for (std::size_t i = 0; i < serial.size(); ++i) {
    auto a = serial[i], b = parallel[i];
    a.timing_ms = b.timing_ms = 0.0;
    EXPECT_EQ(dump_record(a), dump_record(b));
    EXPECT_EQ(a.labels, b.labels);
  }
}

TEST(ToMeasures, UsesMdsymaAndDisqualifiesOnGaps) {
  SetQualScores s;
  s.mdsyma_total = 12.0;
  s.mape_total = 99.0;
  s.mdsyma_peak = 7.0;
  s.mpc_ratio = 0.5;
  s.entropy_weekday = s.entropy_month = s.entropy_total_demand = s.entropy_peak_demand = 1.0;
  s.pct_above_threshold = 40.0;
  s.zero_profile_represented = true;
  auto m = to_measures("r", s);
  EXPECT_FALSE(m.disqualified);
  EXPECT_EQ(std::get<double>(m.values.at(std::string(measures::kErrorTotal))), 12.0);
  EXPECT_EQ(std::get<double>(m.values.at(std::string(measures::kSensibleCount))), 40.0);
  EXPECT_EQ(std::get<bool>(m.values.at(std::string(measures::kZeroProfile))), true);
  s.mpc_ratio.reset();
  EXPECT_TRUE(to_measures("r", s).disqualified);
}

namespace {

RunRecord fake(const std::string& id, std::optional<double> ci, RunStatus status = RunStatus::ok) {
  RunRecord r;
  r.run_id = id;
  r.ci = ci;
  r.status = status;
  return r;
}

SetQualScores flat_scores(double v) {
  SetQualScores s;
  s.mdsyma_total = s.mdsyma_peak = v;
  s.mpc_ratio = 1.0 - v / 100.0;
  s.entropy_weekday = s.entropy_month = s.entropy_total_demand = s.entropy_peak_demand = v;
  s.pct_above_threshold = 100.0 - v;
  s.zero_profile_represented = true;
  s.n_qualifying = 1;
  return s;
}

}  // namespace

TEST(SelectAndRank, TopNLimitsQualitativeWork) {
  const std::vector recs{fake("d", 0.4), fake("a", 0.1), fake("c", std::nullopt, RunStatus::disqualified),
                         fake("b", 0.1), fake("e", 0.9), fake("f", 0.2, RunStatus::failed)};
  std::atomic<int> calls = 0;
  const QualEvaluator eval = [&](const RunRecord& r) {
    ++calls;
    return flat_scores(r.run_id == "d" ? 1.0 : 5.0);
  };
  const auto report = select_and_rank(recs, 3, default_matrix(), eval);
  EXPECT_EQ(calls, 3);
  EXPECT_EQ(report.n_records, 6u);
  EXPECT_EQ(report.n_valid_ci, 4u);
  ASSERT_EQ(report.by_ci.size(), 3u);
  EXPECT_EQ(report.by_ci[0].run_id, "a");  // equal CI ordered by id
  EXPECT_EQ(report.by_ci[1].run_id, "b");
  EXPECT_EQ(report.by_ci[0].rank, 1);
  EXPECT_EQ(report.by_ci[1].rank, 2);
  EXPECT_EQ(report.by_ci[2].run_id, "d");
  EXPECT_EQ(report.by_score.front().run_id, "d");
  EXPECT_FALSE(report.sensitivity.empty());

  const auto single = select_and_rank(recs, 1, default_matrix(), eval);
  ASSERT_EQ(single.by_score.size(), 1u);
  EXPECT_EQ(single.by_score[0].run_id, "a");
  EXPECT_EQ(single.by_score[0].final_rank, 1);
}

TEST(SelectAndRank, EvaluatorFailureDisqualifies) {
  const std::vector recs{fake("a", 0.1), fake("b", 0.2)};
  const QualEvaluator eval = [](const RunRecord& r) -> SetQualScores {
    if (r.run_id == "a") throw MetricError("no cluster above threshold");
    return flat_scores(3.0);
  };
  const auto report = select_and_rank(recs, 10, default_matrix(), eval);
  EXPECT_EQ(report.by_score[0].run_id, "b");
  EXPECT_TRUE(report.by_score[1].disqualified);
  EXPECT_FALSE(report.qualitative[0].error.empty());
}

TEST(SelectAndRank, NoValidCiThrows) {
  const std::vector recs{fake("a", std::nullopt, RunStatus::failed)};
  EXPECT_THROW(select_and_rank(recs, 10, default_matrix(), [](const RunRecord&) { return SetQualScores{}; }), Error);
}

TEST(Results, JsonRoundTripAndDirectoryLayout) {
  auto c = small_config();
  const auto dir = scratch("results");
  c.output_dir = dir;
  const auto data = load_dataset(c.dataset);
  const auto records = run_grid(c, data);
  write_results(dir, records, c);
  EXPECT_TRUE(fs::exists(dir / "config.yaml"));
  EXPECT_TRUE(fs::exists(dir / "index.csv"));

  const auto back = read_results(dir);
  ASSERT_EQ(back.size(), records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    EXPECT_EQ(dump_record(back[i]), dump_record(records[i]));
    EXPECT_EQ(back[i].labels, records[i].labels);
  }
  EXPECT_EQ(dump_record(read_run(dir, records[1].run_id)), dump_record(records[1]));
  EXPECT_THROW(read_run(dir, "missing"), DataError);

  const auto cfg = read_results_config(dir);
  EXPECT_EQ(to_yaml(cfg), to_yaml(c));

  const auto j = to_json(records[0]);
  EXPECT_EQ(j.at("schema_version"), kResultSchemaVersion);
  EXPECT_FALSE(j.contains("labels"));

  const DatasetQualEvaluator eval(data.profiles, c.usability);
  const auto report = select_and_rank(records, 2, default_matrix(), std::cref(eval));
  write_report(dir, report);
  std::ifstream in(dir / "report.json");
  const auto rj = nlohmann::json::parse(in);
  EXPECT_EQ(rj.at("by_ci").size(), 2u);
  fs::remove_all(dir);
}

TEST(Plots, CurvesOmitEmptyClusters) {
  RunRecord r;
  r.run_id = "p<&>";
  HourlyValues v;
  v.fill(1.0);
  r.cluster_sizes = {3, 0, 2};
  r.rdlps = {v, std::nullopt, v};
  const auto dir = scratch("plots");
  const auto files = emit_plots(r, dir);
  ASSERT_EQ(files.size(), 4u);
  std::ifstream curves(dir / "rdlp_curves.csv");
  std::string line;
  std::size_t rows = 0;
  std::getline(curves, line);
  EXPECT_EQ(line, "cluster_id,t,amperes");
  std::set<std::string> ids;
  while (std::getline(curves, line)) {
    ++rows;
    ids.insert(line.substr(0, line.find(',')));
  }
  EXPECT_EQ(rows, 48u);
  EXPECT_EQ(ids, (std::set<std::string>{"0", "2"}));
  std::ifstream svg(dir / "rdlp_curves.svg");
  const std::string text((std::istreambuf_iterator<char>(svg)), {});
  EXPECT_NE(text.find("p&lt;&amp;&gt;"), std::string::npos);
  fs::remove_all(dir);
}
