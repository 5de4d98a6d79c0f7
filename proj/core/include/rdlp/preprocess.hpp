#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "rdlp/matrix.hpp"
#include "rdlp/profile.hpp"

namespace rdlp {

enum class NormalisationMethod { none, unit_norm, deminning, zero_one, sa_norm };

std::string_view to_string(NormalisationMethod method);
/// Accepts the names produced by to_string. Throws ConfigError.
NormalisationMethod parse_normalisation(std::string_view name);

/// Scales one profile. Returns nullopt when the method's denominator is zero
/// (all-zero profile, or a constant profile under de-minning).
///   unit_norm  v / |v|_2
///   deminning  (v - min) / sum(v - min)
///   zero_one   v / max(v)
///   sa_norm    v / mean(v)
std::optional<HourlyValues> normalise(const HourlyValues& values, NormalisationMethod method);

/// Drops all-zero profiles unless keep_zeros. Throws DataError when nothing
/// remains.
ProfileSet filter_zeros(const ProfileSet& set, bool keep_zeros);

/// Clustering input for one normalisation method.
struct NormalisedData {
  Matrix features;                       ///< one row per retained profile
  std::vector<std::size_t> source_rows;  ///< row in the input set of each feature row
  std::size_t excluded = 0;              ///< un-normalisable profiles dropped
};

/// Normalises every profile of `set`. All-zero profiles that are still present
/// (zeros were kept) become the zero vector; any other un-normalisable
/// profile is excluded and counted.
NormalisedData normalise_for_clustering(const ProfileSet& set, NormalisationMethod method);

/// Pre-bin id (1-based) of every profile.
struct BinAssignment {
  std::vector<int> bins;
  int n_bins = 0;

  /// Profile rows of bin `bin` in ascending order.
  std::vector<std::size_t> rows_of(int bin) const;
};

/// Average monthly consumption of one household:
///   (1/12) * sum_days sum_t 230 * l(t)
/// Throws DataError on empty input.
double amc(std::span<const DailyLoadProfile> household_profiles);

/// Bin lower edges in the units of `amc() / scale`. Bin b covers
/// [edges[b-1], edges[b]); the last bin is open ended. The first edge is 0.
struct AmcBinning {
  std::vector<double> edges{0.0, 50.0, 150.0, 400.0, 600.0, 1200.0, 2500.0, 4000.0};
  double scale = 1000.0;
};

/// Throws ConfigError unless edges start at 0 and strictly ascend and scale > 0.
void validate(const AmcBinning& binning);

/// Every profile gets the bin of its household's AMC.
BinAssignment prebin_amc(const ProfileSet& set, const AmcBinning& binning);

/// 25 features per profile: cumulative sum of the unit-norm profile followed
/// by the raw maximum. All-zero profiles map to the zero vector.
Matrix integral_features(const ProfileSet& set);

struct IntegralKMeansOptions {
  int n_bins = 8;
  std::uint64_t seed = 0;
  int max_iterations = 300;
  double tolerance = 1e-6;
};

/// k-means on integral_features, bins relabelled 1..n_bins by ascending mean
/// raw total demand. Throws ParameterError when set.size() < n_bins.
BinAssignment prebin_integral_kmeans(const ProfileSet& set, const IntegralKMeansOptions& options);

}  // namespace rdlp
