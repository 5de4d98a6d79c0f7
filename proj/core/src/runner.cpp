#include "rdlp/runner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <thread>

#include "rdlp/csv_io.hpp"
#include "rdlp/error.hpp"
#include "rdlp/synthetic.hpp"

namespace rdlp {

std::string_view to_string(RunStatus status) {
  switch (status) {
    case RunStatus::ok: return "ok";
    case RunStatus::disqualified: return "disqualified";
    case RunStatus::failed: return "failed";
  }
  return "?";
}

RunStatus parse_run_status(std::string_view name) {
  for (auto s : {RunStatus::ok, RunStatus::disqualified, RunStatus::failed})
    if (to_string(s) == name) return s;
  throw DataError("unknown run status '" + std::string(name) + "'");
}

Dataset load_dataset(const DatasetSource& source) {
  if (source.csv) return {load_csv(*source.csv), {}};
  if (source.synthetic) {
    auto data = generate_synthetic(*source.synthetic);
    return {std::move(data.profiles), std::move(data.labels)};
  }
  throw ConfigError("dataset source is empty");
}

std::string make_run_id(const std::string& experiment, NormalisationMethod normalisation, Algorithm algorithm,
                        std::optional<GridPoint> params, std::uint64_t seed) {
  std::string id = experiment + "-" + std::string(to_string(normalisation)) + "-" + std::string(to_string(algorithm));
  if (params) {
    if (params->s > 0) id += "-s" + std::to_string(params->s);
    if (params->m > 0) id += "-m" + std::to_string(params->m);
  }
  return id + "-seed" + std::to_string(seed);
}

namespace {

// Filtering and pre-binning shared by all runs of one (experiment, seed).
struct Prepared {
  std::string error;
  std::vector<std::size_t> kept;  ///< dataset row of every filtered row
  ProfileSet filtered;
  BinAssignment bins;             ///< over filtered rows
};

struct Normalised {
  std::string error;
  NormalisedData data;  ///< source_rows index filtered rows
};

struct Task {
  std::size_t experiment = 0;
  std::size_t seed = 0;
  std::size_t normalisation = 0;
  std::size_t grid = 0;
  std::optional<GridPoint> point;  ///< set for un-binned runs
};

std::vector<NormalisationMethod> methods_of(const ExperimentConfig& config, const ExperimentSpec& e) {
  return e.normalisations.empty() ? config.normalisations : e.normalisations;
}

Prepared prepare(const ExperimentConfig& config, const ExperimentSpec& e, std::uint64_t seed, const Dataset& data) {
  Prepared p;
  try {
    for (std::size_t i = 0; i < data.profiles.size(); ++i)
      if (e.keep_zeros || total_demand(data.profiles[i]) != 0.0) p.kept.push_back(i);
    p.filtered = filter_zeros(data.profiles, e.keep_zeros);
    switch (e.prebin) {
      case PreBinning::none:
        p.bins.n_bins = 1;
        p.bins.bins.assign(p.filtered.size(), 1);
        break;
      case PreBinning::amc:
        p.bins = prebin_amc(p.filtered, config.amc);
        break;
      case PreBinning::integral_kmeans:
        p.bins = prebin_integral_kmeans(
            p.filtered, {config.n_bins, seed, config.kmeans.max_iterations, config.kmeans.tolerance});
        break;
    }
  } catch (const Error& err) {
    p.error = err.what();
  }
  return p;
}

std::uint64_t bin_seed(std::uint64_t seed, int bin) { return seed * 1000003ULL + static_cast<std::uint64_t>(bin); }

struct BinInput {
  int bin = 0;
  Matrix X;
  std::vector<std::size_t> rows;  ///< dataset rows
};

std::vector<BinInput> split_bins(const Prepared& prep, const NormalisedData& norm) {
  std::vector<BinInput> bins(static_cast<std::size_t>(prep.bins.n_bins));
  for (std::size_t b = 0; b < bins.size(); ++b) bins[b].bin = static_cast<int>(b) + 1;
  for (std::size_t r = 0; r < norm.source_rows.size(); ++r) {
    const auto filtered_row = norm.source_rows[r];
    auto& target = bins[static_cast<std::size_t>(prep.bins.bins[filtered_row] - 1)];
    target.X.append_row(norm.features.row(r));
    target.rows.push_back(prep.kept[filtered_row]);
  }
  std::erase_if(bins, [](const BinInput& b) { return b.rows.empty(); });
  return bins;
}

struct Fitted {
  TrialResult trial;
  Clustering model;
};

Fitted fit(const ExperimentConfig& config, const BinInput& input, Algorithm algorithm, GridPoint point,
           std::uint64_t seed) {
  Fitted f;
  f.trial.params = point;
  try {
    ClusterParams p;
    p.algorithm = algorithm;
    p.m = point.m;
    p.s = point.s;
    p.seed = seed;
    p.kmeans = config.kmeans;
    p.som = config.som;
    f.model = cluster(input.X, p);
    f.trial.quant = evaluate_bin(input.X, f.model.labels, f.model.centroids, config.silhouette_sample_cap,
                                 bin_seed(seed, input.bin));
  } catch (const Error& err) {
    f.trial.error = err.what();
  }
  return f;
}

BinModel to_bin_model(const BinInput& input, Fitted&& best) {
  BinModel m;
  m.bin = input.bin;
  m.rows = input.rows;
  m.params = best.trial.params;
  m.quant = *best.trial.quant;
  m.sizes = cluster_sizes(best.model.labels, best.model.centroids.rows());
  m.labels = std::move(best.model.labels);
  m.centroids = std::move(best.model.centroids);
  return m;
}

void finalise(RunRecord& rec, const Dataset& data) {
  int offset = 0;
  rec.labels.assign(data.profiles.size(), -1);
  for (auto& b : rec.bins) {
    if (b.labels.empty()) continue;
    b.cluster_offset = offset;
    for (std::size_t i = 0; i < b.rows.size(); ++i) rec.labels[b.rows[i]] = offset + b.labels[i];
    offset += static_cast<int>(b.centroids.rows());
  }
  rec.cluster_sizes = cluster_sizes(rec.labels, static_cast<std::size_t>(offset));
  rec.rdlps = compute_rdlp(data.profiles.profiles(), rec.labels, static_cast<std::size_t>(offset));

  if (rec.status != RunStatus::ok) return;
  std::vector<BinIx> parts;
  std::size_t n_total = 0;
  for (const auto& b : rec.bins) {
    parts.push_back({b.quant.ix, b.rows.size()});
    n_total += b.rows.size();
  }
  try {
    rec.ci = combined_index(parts, n_total);
  } catch (const Error& err) {
    rec.status = RunStatus::disqualified;
    rec.error = err.what();
  }
}

void run_unbinned(const ExperimentConfig& config, const BinInput& input, GridPoint point, RunRecord& rec,
                  const Dataset& data) {
  auto f = fit(config, input, rec.algorithm, point, rec.seed);
  BinModel placeholder;
  placeholder.bin = input.bin;
  placeholder.rows = input.rows;
  placeholder.params = point;
  if (!f.trial.quant) {
    rec.status = RunStatus::failed;
    rec.error = f.trial.error;
    placeholder.trials.push_back(std::move(f.trial));
    rec.bins.push_back(std::move(placeholder));
    finalise(rec, data);
    return;
  }
  if (!f.trial.quant->valid) {
    rec.status = RunStatus::disqualified;
    rec.error = "silhouette <= 0, Ix undefined";
  }
  auto trial = f.trial;
  auto model = to_bin_model(input, std::move(f));
  model.trials.push_back(std::move(trial));
  rec.bins.push_back(std::move(model));
  finalise(rec, data);
}

void run_binned(const ExperimentConfig& config, const std::vector<BinInput>& inputs, const AlgorithmGrid& grid,
                RunRecord& rec, const Dataset& data) {
  const auto points = expand(grid);
  for (const auto& input : inputs) {
    std::optional<Fitted> best;
    std::vector<TrialResult> trials;
    for (const auto& point : points) {
      auto f = fit(config, input, grid.algorithm, point, rec.seed);
      trials.push_back(f.trial);
      if (f.trial.usable() && (!best || f.trial.quant->ix < best->trial.quant->ix)) best = std::move(f);
    }
    if (best) {
      auto model = to_bin_model(input, std::move(*best));
      model.trials = std::move(trials);
      rec.bins.push_back(std::move(model));
    } else {
      BinModel empty;
      empty.bin = input.bin;
      empty.rows = input.rows;
      empty.trials = std::move(trials);
      rec.bins.push_back(std::move(empty));
      if (rec.status == RunStatus::ok) {
        rec.status = RunStatus::disqualified;
        rec.error = "bin " + std::to_string(input.bin) + ": no parameterisation with a valid Ix";
      }
    }
  }
  finalise(rec, data);
}

}  // namespace

std::vector<RunRecord> run_grid(const ExperimentConfig& config, const Dataset& data) {
  validate(config);

  // Shared preparation, computed once and read concurrently afterwards.
  std::vector<std::vector<Prepared>> prepared(config.experiments.size());
  std::vector<std::vector<std::vector<Normalised>>> normalised(config.experiments.size());
  std::vector<Task> tasks;
  for (std::size_t e = 0; e < config.experiments.size(); ++e) {
    const auto& exp = config.experiments[e];
    const auto methods = methods_of(config, exp);
    normalised[e].resize(config.seeds.size());
    for (std::size_t s = 0; s < config.seeds.size(); ++s) {
      prepared[e].push_back(prepare(config, exp, config.seeds[s], data));
      const auto& prep = prepared[e].back();
      for (auto method : methods) {
        Normalised n;
        if (prep.error.empty()) {
          n.data = normalise_for_clustering(prep.filtered, method);
          if (n.data.source_rows.empty()) n.error = "no normalisable profiles";
        } else {
          n.error = prep.error;
        }
        normalised[e][s].push_back(std::move(n));
      }
    }
    for (std::size_t n = 0; n < methods.size(); ++n) {
      for (std::size_t g = 0; g < exp.algorithms.size(); ++g) {
        for (std::size_t s = 0; s < config.seeds.size(); ++s) {
          if (exp.prebin == PreBinning::none) {
            for (const auto& point : expand(exp.algorithms[g])) tasks.push_back({e, s, n, g, point});
          } else {
            tasks.push_back({e, s, n, g, std::nullopt});
          }
        }
      }
    }
  }

  std::vector<RunRecord> records(tasks.size());
  auto execute = [&](std::size_t index) {
    const auto& task = tasks[index];
    const auto& exp = config.experiments[task.experiment];
    const auto& grid = exp.algorithms[task.grid];
    const auto method = methods_of(config, exp)[task.normalisation];
    const auto seed = config.seeds[task.seed];
    const auto started = std::chrono::steady_clock::now();

    RunRecord& rec = records[index];
    rec.run_id = make_run_id(exp.name, method, grid.algorithm, task.point, seed);
    rec.experiment = exp.name;
    rec.normalisation = method;
    rec.algorithm = grid.algorithm;
    rec.prebin = exp.prebin;
    rec.keep_zeros = exp.keep_zeros;
    rec.seed = seed;
    rec.params = task.point.value_or(GridPoint{});
    rec.n_input = data.profiles.size();

    const auto& prep = prepared[task.experiment][task.seed];
    const auto& norm = normalised[task.experiment][task.seed][task.normalisation];
    try {
      if (!norm.error.empty()) throw DataError(norm.error);
      rec.n_excluded = norm.data.excluded;
      rec.n_total = norm.data.source_rows.size();
      const auto inputs = split_bins(prep, norm.data);
      if (task.point) {
        run_unbinned(config, inputs.front(), *task.point, rec, data);
      } else {
        run_binned(config, inputs, grid, rec, data);
      }
    } catch (const std::exception& err) {
      rec.status = RunStatus::failed;
      rec.error = err.what();
      rec.ci.reset();
    }
    rec.timing_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
  };

  const auto workers = std::min<std::size_t>(static_cast<std::size_t>(config.workers), tasks.size());
  if (workers <= 1) {
    for (std::size_t i = 0; i < tasks.size(); ++i) execute(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < tasks.size(); i = next++) execute(i);
      });
    }
  }
  return records;
}

DatasetQualEvaluator::DatasetQualEvaluator(const ProfileSet& profiles, UsabilityOptions options)
    : profiles_(&profiles), percentiles_(demand_percentile_features(profiles)), options_(options) {}

SetQualScores DatasetQualEvaluator::operator()(const RunRecord& record) const {
  if (record.labels.size() != profiles_->size())
    throw DataError("run '" + record.run_id + "' labels do not match the dataset");
  QualInput input{profiles_, record.labels, record.n_clusters(), &percentiles_};
  const auto clusters = score_clusters(input);
  auto scores = aggregate_set_scores(clusters, options_.threshold);
  const auto usability = usability_scores(record.cluster_sizes, record.rdlps, options_);
  scores.pct_above_threshold = usability.pct_above_threshold;
  scores.zero_profile_represented = usability.zero_profile_represented;
  scores.n_clusters_ok = usability.n_clusters_ok;
  scores.n_clusters = usability.n_clusters;
  return scores;
}

RunMeasures to_measures(const std::string& run_id, const SetQualScores& s) {
  using namespace measures;
  RunMeasures m;
  m.run_id = run_id;
  m.values.emplace(std::string(kSensibleCount), s.pct_above_threshold);
  m.values.emplace(std::string(kZeroProfile), s.zero_profile_represented);
  const std::pair<std::string_view, const std::optional<double>*> optional_values[] = {
      {kErrorTotal, &s.mdsyma_total},        {kErrorPeak, &s.mdsyma_peak},
      {kPeakCoincidence, &s.mpc_ratio},      {kEntropyWeekday, &s.entropy_weekday},
      {kEntropyMonth, &s.entropy_month},     {kEntropyTotal, &s.entropy_total_demand},
      {kEntropyPeak, &s.entropy_peak_demand},
  };
  for (const auto& [name, value] : optional_values) {
    if (*value) {
      m.values.emplace(std::string(name), **value);
    } else if (!m.disqualified) {
      m.disqualified = true;
      m.reason = std::string(name) + " undefined for every qualifying cluster";
    }
  }
  return m;
}

FinalReport select_and_rank(const std::vector<RunRecord>& records, std::size_t top_n, const ScoringMatrix& matrix,
                            const QualEvaluator& evaluate) {
  FinalReport report;
  report.n_records = records.size();
  report.matrix = matrix;

  std::vector<const RunRecord*> valid;
  for (const auto& r : records)
    if (r.status == RunStatus::ok && r.ci && std::isfinite(*r.ci)) valid.push_back(&r);
  report.n_valid_ci = valid.size();
  if (valid.empty()) throw Error("no run has a valid CI");

  std::stable_sort(valid.begin(), valid.end(), [](const RunRecord* a, const RunRecord* b) {
    if (*a->ci != *b->ci) return *a->ci < *b->ci;
    return a->run_id < b->run_id;
  });
  valid.resize(std::min(top_n, valid.size()));

  std::vector<RunMeasures> table;
  for (std::size_t i = 0; i < valid.size(); ++i) {
    const auto& rec = *valid[i];
    report.by_ci.push_back({rec.run_id, *rec.ci, static_cast<int>(i) + 1});
    QualOutcome outcome{rec.run_id, std::nullopt, {}};
    try {
      outcome.scores = evaluate(rec);
      table.push_back(to_measures(rec.run_id, *outcome.scores));
    } catch (const Error& err) {
      outcome.error = err.what();
      RunMeasures dq;
      dq.run_id = rec.run_id;
      dq.disqualified = true;
      dq.reason = err.what();
      table.push_back(std::move(dq));
    }
    report.qualitative.push_back(std::move(outcome));
  }
  report.by_score = score_runs(table, matrix);
  report.sensitivity = weight_sensitivity(table, matrix);
  return report;
}

}  // namespace rdlp
