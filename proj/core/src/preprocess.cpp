#include "rdlp/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "rdlp/clustering.hpp"
#include "rdlp/error.hpp"

namespace rdlp {

namespace {

constexpr double kVolts = 230.0;

bool all_zero(const HourlyValues& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; });
}

HourlyValues scaled(const HourlyValues& v, double divisor) {
  HourlyValues out;
  for (std::size_t t = 0; t < kHours; ++t) out[t] = v[t] / divisor;
  return out;
}

}  // namespace

std::string_view to_string(NormalisationMethod method) {
  switch (method) {
    case NormalisationMethod::none: return "none";
    case NormalisationMethod::unit_norm: return "unit_norm";
    case NormalisationMethod::deminning: return "deminning";
    case NormalisationMethod::zero_one: return "zero_one";
    case NormalisationMethod::sa_norm: return "sa_norm";
  }
  return "?";
}

NormalisationMethod parse_normalisation(std::string_view name) {
  for (auto m : {NormalisationMethod::none, NormalisationMethod::unit_norm, NormalisationMethod::deminning,
                 NormalisationMethod::zero_one, NormalisationMethod::sa_norm}) {
    if (to_string(m) == name) return m;
  }
  throw ConfigError("unknown normalisation '" + std::string(name) + "'");
}

std::optional<HourlyValues> normalise(const HourlyValues& values, NormalisationMethod method) {
  switch (method) {
    case NormalisationMethod::none:
      return values;
    case NormalisationMethod::unit_norm: {
      double sq = 0.0;
      for (double v : values) sq += v * v;
      if (sq == 0.0) return std::nullopt;
      return scaled(values, std::sqrt(sq));
    }
    case NormalisationMethod::deminning: {
      const double lo = *std::min_element(values.begin(), values.end());
      HourlyValues shifted;
      double sum = 0.0;
      for (std::size_t t = 0; t < kHours; ++t) {
        shifted[t] = values[t] - lo;
        sum += shifted[t];
      }
      if (sum == 0.0) return std::nullopt;
      return scaled(shifted, sum);
    }
    case NormalisationMethod::zero_one: {
      const double hi = *std::max_element(values.begin(), values.end());
      if (hi == 0.0) return std::nullopt;
      return scaled(values, hi);
    }
    case NormalisationMethod::sa_norm: {
      const double mean = total_demand(values) / static_cast<double>(kHours);
      if (mean == 0.0) return std::nullopt;
      return scaled(values, mean);
    }
  }
  return std::nullopt;
}

ProfileSet filter_zeros(const ProfileSet& set, bool keep_zeros) {
  if (keep_zeros) {
    if (set.empty()) throw DataError("no profiles to cluster");
    return set;
  }
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < set.size(); ++i)
    if (total_demand(set[i]) != 0.0) rows.push_back(i);
  if (rows.empty()) throw DataError("no profiles left after dropping all-zero profiles");
  return set.select(rows);
}

NormalisedData normalise_for_clustering(const ProfileSet& set, NormalisationMethod method) {
  NormalisedData out;
  out.source_rows.reserve(set.size());
  for (std::size_t i = 0; i < set.size(); ++i) {
    const auto& v = set[i].values;
    if (all_zero(v)) {
      out.features.append_row(HourlyValues{});
      out.source_rows.push_back(i);
      continue;
    }
    if (auto n = normalise(v, method)) {
      out.features.append_row(*n);
      out.source_rows.push_back(i);
    } else {
      ++out.excluded;
    }
  }
  return out;
}

std::vector<std::size_t> BinAssignment::rows_of(int bin) const {
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < bins.size(); ++i)
    if (bins[i] == bin) rows.push_back(i);
  return rows;
}

double amc(std::span<const DailyLoadProfile> household_profiles) {
  if (household_profiles.empty()) throw DataError("amc: household has no profiles");
  double sum = 0.0;
  for (const auto& p : household_profiles)
    for (double v : p.values) sum += kVolts * v;
  return sum / 12.0;
}

void validate(const AmcBinning& binning) {
  if (binning.edges.empty()) throw ConfigError("amc bin edges must not be empty");
  if (binning.edges.front() != 0.0) throw ConfigError("the first amc bin edge must be 0");
  for (std::size_t i = 1; i < binning.edges.size(); ++i) {
    if (!(binning.edges[i] > binning.edges[i - 1]))
      throw ConfigError("amc bin edges must be strictly ascending");
  }
  if (!(binning.scale > 0.0)) throw ConfigError("amc scale must be > 0");
}

BinAssignment prebin_amc(const ProfileSet& set, const AmcBinning& binning) {
  validate(binning);
  BinAssignment out;
  out.n_bins = static_cast<int>(binning.edges.size());
  out.bins.assign(set.size(), 0);
  const auto all = set.profiles();
  for (const auto& [household, rows] : set.households()) {
    std::vector<DailyLoadProfile> own;
    own.reserve(rows.size());
    for (auto r : rows) own.push_back(all[r]);
    const double value = amc(own) / binning.scale;
    // half-open [lo, hi): a value on an edge belongs to the upper bin
    const auto bin = std::upper_bound(binning.edges.begin(), binning.edges.end(), value) - binning.edges.begin();
    for (auto r : rows) out.bins[r] = static_cast<int>(bin);
  }
  return out;
}

Matrix integral_features(const ProfileSet& set) {
  Matrix features(set.size(), kHours + 1);
  for (std::size_t i = 0; i < set.size(); ++i) {
    const auto& v = set[i].values;
    auto row = features.row(i);
    if (auto unit = normalise(v, NormalisationMethod::unit_norm)) {
      std::partial_sum(unit->begin(), unit->end(), row.begin());
    }
    row[kHours] = peak_demand(v);
  }
  return features;
}

BinAssignment prebin_integral_kmeans(const ProfileSet& set, const IntegralKMeansOptions& options) {
  if (options.n_bins < 1) throw ParameterError("integral kmeans: n_bins must be >= 1");
  if (set.size() < static_cast<std::size_t>(options.n_bins)) {
    throw ParameterError("integral kmeans: " + std::to_string(set.size()) + " profiles cannot fill " +
                         std::to_string(options.n_bins) + " bins");
  }
  const auto fit = kmeans(integral_features(set), options.n_bins, options.seed,
                          {options.max_iterations, options.tolerance});

  const auto k = static_cast<std::size_t>(options.n_bins);
  std::vector<double> mean_total(k, 0.0);
  const auto sizes = cluster_sizes(fit.labels, k);
  for (std::size_t i = 0; i < set.size(); ++i) mean_total[static_cast<std::size_t>(fit.labels[i])] += total_demand(set[i]);
  for (std::size_t c = 0; c < k; ++c) mean_total[c] = sizes[c] ? mean_total[c] / static_cast<double>(sizes[c]) : 0.0;

  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return mean_total[a] < mean_total[b]; });
  std::vector<int> bin_of(k);
  for (std::size_t rank = 0; rank < k; ++rank) bin_of[order[rank]] = static_cast<int>(rank) + 1;

  BinAssignment out;
  out.n_bins = options.n_bins;
  out.bins.resize(set.size());
  for (std::size_t i = 0; i < set.size(); ++i) out.bins[i] = bin_of[static_cast<std::size_t>(fit.labels[i])];
  return out;
}

}  // namespace rdlp
