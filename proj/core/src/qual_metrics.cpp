#include "rdlp/qual_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rdlp/clustering.hpp"
#include "rdlp/error.hpp"

namespace rdlp {

double median(std::vector<double> values) {
  if (values.empty()) throw MetricError("median of an empty sequence");
  const std::size_t n = values.size();
  const auto mid = values.begin() + static_cast<std::ptrdiff_t>(n / 2);
  std::nth_element(values.begin(), mid, values.end());
  const double upper = *mid;
  if (n % 2 == 1) return upper;
  const double lower = *std::max_element(values.begin(), mid);
  return 0.5 * (lower + upper);
}

std::optional<ConsumptionErrors> consumption_errors(std::span<const double> member_demands, double rdlp_demand) {
  if (!(rdlp_demand > 0.0)) return std::nullopt;
  ConsumptionErrors e;
  std::vector<double> ape, log_q, abs_log_q;
  for (double d : member_demands) {
    if (!(d > 0.0)) {
      ++e.excluded;
      continue;
    }
    ape.push_back(std::abs(d - rdlp_demand) / d);
    const double lq = std::log(rdlp_demand / d);
    log_q.push_back(lq);
    abs_log_q.push_back(std::abs(lq));
  }
  e.used = ape.size();
  if (e.used == 0) return std::nullopt;
  e.mape = 100.0 * std::accumulate(ape.begin(), ape.end(), 0.0) / static_cast<double>(e.used);
  e.mdape = 100.0 * median(std::move(ape));
  e.mdlq = median(std::move(log_q));
  e.mdsyma = 100.0 * (std::exp(median(std::move(abs_log_q))) - 1.0);
  return e;
}

std::vector<int> detect_peaks(std::span<const double, kHours> values) {
  const double hi = *std::max_element(values.begin(), values.end());
  std::vector<int> peaks;
  if (!(hi > 0.0)) return peaks;
  const double threshold = 0.5 * hi;
  std::size_t i = 0;
  while (i < kHours) {
    std::size_t j = i;
    while (j + 1 < kHours && values[j + 1] == values[i]) ++j;
    const bool left = i == 0 || values[i - 1] < values[i];
    const bool right = j + 1 == kHours || values[j + 1] < values[i];
    if (left && right && values[i] > threshold) peaks.push_back(static_cast<int>(i));
    i = j + 1;
  }
  return peaks;
}

PeakCoincidence mpc_ratio(std::span<const HourlyValues> members, const HourlyValues& rdlp) {
  PeakCoincidence out;
  const auto reference = detect_peaks(rdlp);
  if (reference.empty() || members.empty()) {
    out.rdlp_has_peaks = !reference.empty();
    return out;
  }
  std::size_t shared = 0;
  for (const auto& m : members) {
    const auto own = detect_peaks(m);
    for (int t : own)
      if (std::binary_search(reference.begin(), reference.end(), t)) ++shared;
  }
  out.mpc = static_cast<double>(shared) / static_cast<double>(members.size());
  out.ratio = out.mpc / static_cast<double>(reference.size());
  return out;
}

double cluster_entropy(std::span<const int> member_values, int n_values) {
  if (member_values.empty()) return 0.0;
  std::vector<std::size_t> counts(static_cast<std::size_t>(n_values), 0);
  for (int v : member_values) {
    if (v < 0 || v >= n_values) throw MetricError("feature value out of range");
    ++counts[static_cast<std::size_t>(v)];
  }
  const double n = static_cast<double>(member_values.size());
  double h = 0.0;
  for (auto c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / n;
    h -= p * std::log2(p);
  }
  return h;
}

std::vector<int> percentile_bins(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<int> bins(n, 0);
  if (n < 2) return bins;
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < n; ++i) {
    const auto rank = static_cast<std::size_t>(std::lower_bound(sorted.begin(), sorted.end(), values[i]) -
                                               sorted.begin());
    const auto bin = static_cast<int>(std::floor(100.0 * static_cast<double>(rank) / static_cast<double>(n - 1)));
    bins[i] = std::min(bin, kDemandPercentiles - 1);
  }
  return bins;
}

DemandPercentiles demand_percentile_features(const ProfileSet& set) {
  std::vector<double> totals, peaks;
  totals.reserve(set.size());
  peaks.reserve(set.size());
  for (const auto& p : set) {
    totals.push_back(total_demand(p));
    peaks.push_back(peak_demand(p));
  }
  return {percentile_bins(totals), percentile_bins(peaks)};
}

std::vector<ClusterQualScores> score_clusters(const QualInput& input) {
  const ProfileSet& set = *input.profiles;
  if (input.labels.size() != set.size()) throw MetricError("labels do not cover the profile set");
  if (input.percentiles == nullptr || input.percentiles->total.size() != set.size())
    throw MetricError("demand percentiles do not cover the profile set");

  std::vector<std::vector<std::size_t>> members(input.n_clusters);
  for (std::size_t i = 0; i < set.size(); ++i) {
    const int l = input.labels[i];
    if (l < 0) continue;
    if (static_cast<std::size_t>(l) >= input.n_clusters) throw MetricError("label out of range");
    members[static_cast<std::size_t>(l)].push_back(i);
  }
  const auto rdlps = compute_rdlp(set.profiles(), input.labels, input.n_clusters);

  std::vector<ClusterQualScores> out;
  for (std::size_t c = 0; c < input.n_clusters; ++c) {
    const auto& rows = members[c];
    if (rows.empty()) continue;
    const HourlyValues& rdlp = *rdlps[c];

    std::vector<double> totals, peaks;
    std::vector<HourlyValues> curves;
    std::vector<int> weekday, month, total_pct, peak_pct;
    for (auto r : rows) {
      totals.push_back(total_demand(set[r]));
      peaks.push_back(peak_demand(set[r]));
      curves.push_back(set[r].values);
      weekday.push_back(set.weekday(r));
      month.push_back(set.month(r) - 1);
      total_pct.push_back(input.percentiles->total[r]);
      peak_pct.push_back(input.percentiles->peak[r]);
    }

    ClusterQualScores s;
    s.cluster = static_cast<int>(c);
    s.member_count = rows.size();
    s.total_error = consumption_errors(totals, total_demand(rdlp));
    s.peak_error = consumption_errors(peaks, peak_demand(rdlp));
    const auto pc = mpc_ratio(curves, rdlp);
    if (pc.rdlp_has_peaks) s.mpc_ratio = pc.ratio;
    s.entropy_weekday = cluster_entropy(weekday, kWeekdays);
    s.entropy_month = cluster_entropy(month, kMonths);
    s.entropy_total_demand = cluster_entropy(total_pct, kDemandPercentiles);
    s.entropy_peak_demand = cluster_entropy(peak_pct, kDemandPercentiles);
    out.push_back(std::move(s));
  }
  return out;
}

Usability usability_scores(std::span<const std::size_t> cluster_sizes,
                           std::span<const std::optional<HourlyValues>> rdlps, const UsabilityOptions& options) {
  Usability u;
  std::size_t above = 0;
  for (auto size : cluster_sizes) {
    if (size == 0) continue;
    ++u.n_clusters;
    if (size > options.threshold) ++above;
  }
  u.pct_above_threshold = u.n_clusters ? 100.0 * static_cast<double>(above) / static_cast<double>(u.n_clusters) : 0.0;
  for (const auto& r : rdlps) {
    if (r && total_demand(*r) < options.zero_tol) u.zero_profile_represented = true;
  }
  u.n_clusters_ok = u.n_clusters <= options.max_clusters;
  return u;
}

namespace {

// Size-weighted mean of the defined values.
class WeightedMean {
 public:
  void add(std::size_t weight, const std::optional<double>& value) {
    if (!value) return;
    sum_ += static_cast<double>(weight) * *value;
    weight_ += static_cast<double>(weight);
  }
  std::optional<double> value() const {
    if (weight_ == 0.0) return std::nullopt;
    return sum_ / weight_;
  }

 private:
  double sum_ = 0.0;
  double weight_ = 0.0;
};

template <class F>
std::optional<double> field(const std::optional<ConsumptionErrors>& e, F f) {
  return e ? std::optional<double>(f(*e)) : std::nullopt;
}

}  // namespace

SetQualScores aggregate_set_scores(std::span<const ClusterQualScores> clusters, std::size_t threshold) {
  WeightedMean mape_t, mdape_t, mdlq_t, mdsyma_t, mape_p, mdape_p, mdlq_p, mdsyma_p, mpc, ew, em, et, ep;
  SetQualScores out;
  for (const auto& c : clusters) {
    if (c.member_count <= threshold) continue;
    ++out.n_qualifying;
    const auto w = c.member_count;
    mape_t.add(w, field(c.total_error, [](auto& e) { return e.mape; }));
    mdape_t.add(w, field(c.total_error, [](auto& e) { return e.mdape; }));
    mdlq_t.add(w, field(c.total_error, [](auto& e) { return e.mdlq; }));
    mdsyma_t.add(w, field(c.total_error, [](auto& e) { return e.mdsyma; }));
    mape_p.add(w, field(c.peak_error, [](auto& e) { return e.mape; }));
    mdape_p.add(w, field(c.peak_error, [](auto& e) { return e.mdape; }));
    mdlq_p.add(w, field(c.peak_error, [](auto& e) { return e.mdlq; }));
    mdsyma_p.add(w, field(c.peak_error, [](auto& e) { return e.mdsyma; }));
    mpc.add(w, c.mpc_ratio);
    ew.add(w, c.entropy_weekday);
    em.add(w, c.entropy_month);
    et.add(w, c.entropy_total_demand);
    ep.add(w, c.entropy_peak_demand);
  }
  if (out.n_qualifying == 0)
    throw MetricError("no cluster has more than " + std::to_string(threshold) + " members");
  out.mape_total = mape_t.value();
  out.mdape_total = mdape_t.value();
  out.mdlq_total = mdlq_t.value();
  out.mdsyma_total = mdsyma_t.value();
  out.mape_peak = mape_p.value();
  out.mdape_peak = mdape_p.value();
  out.mdlq_peak = mdlq_p.value();
  out.mdsyma_peak = mdsyma_p.value();
  out.mpc_ratio = mpc.value();
  out.entropy_weekday = ew.value();
  out.entropy_month = em.value();
  out.entropy_total_demand = et.value();
  out.entropy_peak_demand = ep.value();
  return out;
}

}  // namespace rdlp
