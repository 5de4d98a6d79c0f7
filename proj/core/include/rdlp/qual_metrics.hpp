#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "rdlp/profile.hpp"

namespace rdlp {

/// Deviation of cluster demand from its members' demands, in the four forms
/// MAPE, MdAPE (percent), MdLQ (log ratio) and MdSymA (percent).
struct ConsumptionErrors {
  double mape = 0.0;
  double mdape = 0.0;
  double mdlq = 0.0;
  double mdsyma = 0.0;
  std::size_t used = 0;      ///< members contributing
  std::size_t excluded = 0;  ///< members with zero demand
};

/// Members with zero demand are excluded. Returns nullopt when the RDLP
/// demand is zero or no member remains.
std::optional<ConsumptionErrors> consumption_errors(std::span<const double> member_demands, double rdlp_demand);

/// Median with the mean of the middle pair for even sizes. Input must be
/// non-empty.
double median(std::vector<double> values);

/// Hours that are local maxima above half the profile maximum. A plateau
/// counts once, at its first hour; series ends count as lower neighbours.
/// Empty for an all-zero profile.
std::vector<int> detect_peaks(std::span<const double, kHours> values);

struct PeakCoincidence {
  double mpc = 0.0;    ///< mean count of shared peak hours per member
  double ratio = 0.0;  ///< mpc / number of RDLP peaks, in [0, 1]
  bool rdlp_has_peaks = true;
};

PeakCoincidence mpc_ratio(std::span<const HourlyValues> members, const HourlyValues& rdlp);

/// Shannon entropy in bits of the members' feature values (0 .. n_values-1).
double cluster_entropy(std::span<const int> member_values, int n_values);

inline constexpr int kDemandPercentiles = 100;

struct DemandPercentiles {
  std::vector<int> total;  ///< 0..99 per profile
  std::vector<int> peak;
};

/// Percentile bin of every profile's total and peak demand within the set:
/// floor(100 * rank / (n - 1)) capped at 99, rank counting strictly smaller
/// values so ties share a bin.
DemandPercentiles demand_percentile_features(const ProfileSet& set);

/// Percentile bins of arbitrary values, same rule as above.
std::vector<int> percentile_bins(std::span<const double> values);

/// Per-cluster qualitative scores. Optional fields are undefined for the
/// cluster (zero-demand RDLP, no peaks).
struct ClusterQualScores {
  int cluster = 0;
  std::size_t member_count = 0;
  std::optional<ConsumptionErrors> total_error;
  std::optional<ConsumptionErrors> peak_error;
  std::optional<double> mpc_ratio;
  double entropy_weekday = 0.0;
  double entropy_month = 0.0;
  double entropy_total_demand = 0.0;
  double entropy_peak_demand = 0.0;
};

/// Inputs describing one clustered profile set.
struct QualInput {
  const ProfileSet* profiles = nullptr;
  std::span<const int> labels;  ///< per profile; negative = not clustered
  std::size_t n_clusters = 0;
  const DemandPercentiles* percentiles = nullptr;  ///< aligned with *profiles
};

/// Scores every non-empty cluster, RDLP = mean of raw members.
std::vector<ClusterQualScores> score_clusters(const QualInput& input);

struct UsabilityOptions {
  std::size_t threshold = 10490;
  std::size_t max_clusters = 220;
  double zero_tol = 1e-6;  ///< Amperes, on RDLP total demand
};

struct Usability {
  double pct_above_threshold = 0.0;
  bool zero_profile_represented = false;
  bool n_clusters_ok = true;
  std::size_t n_clusters = 0;  ///< non-empty clusters
};

/// Percentage of non-empty clusters with more than `threshold` members, zero
/// profile representation (some RDLP total below zero_tol) and the cluster
/// count limit.
Usability usability_scores(std::span<const std::size_t> cluster_sizes,
                           std::span<const std::optional<HourlyValues>> rdlps, const UsabilityOptions& options);

struct SetQualScores {
  std::optional<double> mape_total, mdape_total, mdlq_total, mdsyma_total;
  std::optional<double> mape_peak, mdape_peak, mdlq_peak, mdsyma_peak;
  std::optional<double> mpc_ratio;
  std::optional<double> entropy_weekday, entropy_month, entropy_total_demand, entropy_peak_demand;
  std::size_t n_qualifying = 0;
  double pct_above_threshold = 0.0;
  bool zero_profile_represented = false;
  bool n_clusters_ok = true;
  std::size_t n_clusters = 0;
};

/// Size-weighted means over clusters with more than `threshold` members.
/// A measure undefined for a cluster is averaged over the remaining ones.
/// Throws MetricError when no cluster qualifies.
SetQualScores aggregate_set_scores(std::span<const ClusterQualScores> clusters, std::size_t threshold);

}  // namespace rdlp
