#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rdlp/clustering.hpp"
#include "rdlp/config.hpp"
#include "rdlp/quant_metrics.hpp"
#include "rdlp/qual_metrics.hpp"
#include "rdlp/scoring.hpp"

namespace rdlp {

/// The profiles a grid runs on, plus generator labels for synthetic data.
struct Dataset {
  ProfileSet profiles;
  std::vector<int> archetypes;  ///< empty for CSV data
};

Dataset load_dataset(const DatasetSource& source);

/// One parameterisation evaluated on one bin.
struct TrialResult {
  GridPoint params;
  std::optional<BinQuant> quant;
  std::string error;

  bool usable() const { return quant && quant->valid; }
};

/// Clustering of one bin. Labels are bin-local cluster ids aligned with
/// `rows`; global cluster id = cluster_offset + local id.
struct BinModel {
  int bin = 1;
  std::vector<std::size_t> rows;  ///< dataset rows clustered in this bin
  GridPoint params;               ///< selected parameterisation
  Matrix centroids;               ///< normalised (feature) space
  std::vector<int> labels;
  std::vector<std::size_t> sizes;
  int cluster_offset = 0;
  BinQuant quant;
  std::vector<TrialResult> trials;  ///< every parameterisation tried on this bin
};

enum class RunStatus { ok, disqualified, failed };
std::string_view to_string(RunStatus status);
RunStatus parse_run_status(std::string_view name);

struct RunRecord {
  std::string run_id;
  std::string experiment;
  NormalisationMethod normalisation = NormalisationMethod::none;
  Algorithm algorithm = Algorithm::kmeans;
  PreBinning prebin = PreBinning::none;
  bool keep_zeros = true;
  std::uint64_t seed = 0;
  GridPoint params;  ///< the parameterisation of an un-binned run; zero when chosen per bin

  RunStatus status = RunStatus::ok;
  std::string error;

  std::size_t n_input = 0;     ///< dataset rows
  std::size_t n_total = 0;     ///< rows clustered
  std::size_t n_excluded = 0;  ///< un-normalisable rows
  std::optional<double> ci;
  std::vector<BinModel> bins;

  std::vector<std::size_t> cluster_sizes;  ///< by global cluster id
  std::vector<std::optional<HourlyValues>> rdlps;
  std::vector<int> labels;  ///< global cluster id per dataset row, -1 if not clustered

  double timing_ms = 0.0;

  std::size_t n_clusters() const { return cluster_sizes.size(); }
};

/// Deterministic run id from experiment, parameters and seed.
std::string make_run_id(const std::string& experiment, NormalisationMethod normalisation, Algorithm algorithm,
                        std::optional<GridPoint> params, std::uint64_t seed);

/// Executes every experiment x normalisation x algorithm x parameterisation x
/// seed combination. Un-binned experiments give one record per
/// parameterisation; pre-binned experiments give one record per algorithm in
/// which every bin keeps its lowest-Ix parameterisation before CI
/// aggregation. Failures are captured in the record. Records come back in
/// grid order regardless of `config.workers`.
std::vector<RunRecord> run_grid(const ExperimentConfig& config, const Dataset& data);

/// Computes qualitative scores of one record.
using QualEvaluator = std::function<SetQualScores(const RunRecord&)>;

/// Qualitative evaluation against the dataset the records were fitted on.
class DatasetQualEvaluator {
 public:
  DatasetQualEvaluator(const ProfileSet& profiles, UsabilityOptions options);
  SetQualScores operator()(const RunRecord& record) const;

 private:
  const ProfileSet* profiles_;
  DemandPercentiles percentiles_;
  UsabilityOptions options_;
};

/// Maps qualitative scores onto the scoring-matrix measures. Consumption
/// error measures use MdSymA. A missing value disqualifies the run.
RunMeasures to_measures(const std::string& run_id, const SetQualScores& scores);

struct CiRanked {
  std::string run_id;
  double ci = 0.0;
  int rank = 0;
};

struct QualOutcome {
  std::string run_id;
  std::optional<SetQualScores> scores;
  std::string error;
};

struct FinalReport {
  std::size_t n_records = 0;
  std::size_t n_valid_ci = 0;
  std::vector<CiRanked> by_ci;        ///< stage 1, ascending CI, top_n kept
  std::vector<QualOutcome> qualitative;  ///< stage 2 inputs, same order as by_ci
  std::vector<RunScore> by_score;     ///< stage 2 ranking
  std::vector<SensitivityCase> sensitivity;
  ScoringMatrix matrix;
};

/// Stage 1 keeps the top_n records by ascending CI (ties by run id). Stage 2
/// evaluates only those records qualitatively and ranks them with the
/// scoring matrix. Throws Error when no record has a valid CI.
FinalReport select_and_rank(const std::vector<RunRecord>& records, std::size_t top_n, const ScoringMatrix& matrix,
                            const QualEvaluator& evaluate);

}  // namespace rdlp
