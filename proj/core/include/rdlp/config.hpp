#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rdlp/clustering.hpp"
#include "rdlp/preprocess.hpp"
#include "rdlp/qual_metrics.hpp"
#include "rdlp/scoring.hpp"
#include "rdlp/synthetic.hpp"

namespace rdlp {

enum class PreBinning { none, amc, integral_kmeans };

std::string_view to_string(PreBinning prebin);
PreBinning parse_prebinning(std::string_view name);

/// Parameter grid of one algorithm. `m` is used by kmeans and som_kmeans,
/// `s` by som and som_kmeans.
struct AlgorithmGrid {
  Algorithm algorithm = Algorithm::kmeans;
  std::vector<int> m;
  std::vector<int> s;
};

struct GridPoint {
  int m = 0;
  int s = 0;
};

/// Every parameterisation of the grid, s-major. som_kmeans pairs with
/// s*s <= m are skipped.
std::vector<GridPoint> expand(const AlgorithmGrid& grid);

struct ExperimentSpec {
  std::string name;
  bool keep_zeros = true;
  PreBinning prebin = PreBinning::none;
  std::vector<AlgorithmGrid> algorithms;
  /// Overrides the config-wide normalisation list when non-empty.
  std::vector<NormalisationMethod> normalisations;
};

struct DatasetSource {
  std::optional<std::filesystem::path> csv;
  std::optional<SyntheticSpec> synthetic;
};

struct ExperimentConfig {
  DatasetSource dataset;
  std::vector<NormalisationMethod> normalisations{NormalisationMethod::unit_norm};
  std::vector<ExperimentSpec> experiments;
  std::vector<std::uint64_t> seeds{0};
  std::size_t top_n = 10;
  std::optional<std::filesystem::path> scoring_matrix;
  std::filesystem::path output_dir = "results";
  AmcBinning amc;
  int n_bins = 8;  ///< integral k-means bins
  KMeansOptions kmeans;
  SomOptions som;
  std::size_t silhouette_sample_cap = 20000;
  UsabilityOptions usability;
  int workers = 1;
};

/// Throws ConfigError when the config is unusable: no dataset, empty grids,
/// a som_kmeans grid with no s*s > m pair, invalid bin edges.
void validate(const ExperimentConfig& config);

/// YAML config. Relative paths resolve against `base_dir`.
ExperimentConfig parse_config(std::string_view yaml, const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);
/// Round-trips through parse_config. Paths are written as given.
std::string to_yaml(const ExperimentConfig& config);

SyntheticSpec parse_synthetic_spec(std::string_view yaml);
SyntheticSpec load_synthetic_spec(const std::filesystem::path& path);

ScoringMatrix parse_scoring_matrix(std::string_view yaml);
ScoringMatrix load_scoring_matrix(const std::filesystem::path& path);
std::string to_yaml(const ScoringMatrix& matrix);

}  // namespace rdlp
