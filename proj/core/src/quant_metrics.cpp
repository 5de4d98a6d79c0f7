#include "rdlp/quant_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <string>

#include "rdlp/error.hpp"

namespace rdlp {

namespace {

struct Dispersion {
  std::vector<std::size_t> clusters;  ///< non-empty cluster ids
  std::vector<double> mean_dist;      ///< per entry of `clusters`
  std::vector<double> mean_sq_dist;
};

Dispersion dispersion(const Matrix& X, std::span<const int> labels, const Matrix& centroids) {
  if (labels.size() != X.rows()) throw MetricError("labels do not cover the data");
  const std::size_t k = centroids.rows();
  std::vector<double> dist(k, 0.0), sq(k, 0.0);
  std::vector<std::size_t> count(k, 0);
  for (std::size_t i = 0; i < X.rows(); ++i) {
    if (labels[i] < 0 || static_cast<std::size_t>(labels[i]) >= k) throw MetricError("label out of range");
    const auto c = static_cast<std::size_t>(labels[i]);
    const double d2 = squared_distance(X.row(i), centroids.row(c));
    dist[c] += std::sqrt(d2);
    sq[c] += d2;
    ++count[c];
  }
  Dispersion out;
  for (std::size_t c = 0; c < k; ++c) {
    if (count[c] == 0) continue;
    out.clusters.push_back(c);
    out.mean_dist.push_back(dist[c] / static_cast<double>(count[c]));
    out.mean_sq_dist.push_back(sq[c] / static_cast<double>(count[c]));
  }
  return out;
}

}  // namespace

double dbi(const Matrix& X, std::span<const int> labels, const Matrix& centroids) {
  const auto disp = dispersion(X, labels, centroids);
  const std::size_t k = disp.clusters.size();
  if (k < 2) throw MetricError("dbi needs at least two non-empty clusters");
  double total = 0.0;
  for (std::size_t a = 0; a < k; ++a) {
    double worst = 0.0;
    for (std::size_t b = 0; b < k; ++b) {
      if (a == b) continue;
      const double sep =
          std::sqrt(squared_distance(centroids.row(disp.clusters[a]), centroids.row(disp.clusters[b])));
      if (sep == 0.0) {
        throw MetricError("dbi: clusters " + std::to_string(disp.clusters[a]) + " and " +
                          std::to_string(disp.clusters[b]) + " have identical centroids");
      }
      worst = std::max(worst, (disp.mean_dist[a] + disp.mean_dist[b]) / sep);
    }
    total += worst;
  }
  return total / static_cast<double>(k);
}

double mia(const Matrix& X, std::span<const int> labels, const Matrix& centroids) {
  const auto disp = dispersion(X, labels, centroids);
  if (disp.clusters.empty()) throw MetricError("mia needs at least one non-empty cluster");
  const double mean = std::accumulate(disp.mean_sq_dist.begin(), disp.mean_sq_dist.end(), 0.0) /
                      static_cast<double>(disp.clusters.size());
  return std::sqrt(mean);
}

double silhouette(const Matrix& X, std::span<const int> labels, std::size_t sample_cap, std::uint64_t seed) {
  if (labels.size() != X.rows()) throw MetricError("labels do not cover the data");
  std::vector<std::size_t> rows(X.rows());
  std::iota(rows.begin(), rows.end(), 0);
  if (sample_cap > 0 && rows.size() > sample_cap) {
    std::vector<std::size_t> picked;
    picked.reserve(sample_cap);
    std::mt19937_64 rng(seed);
    std::sample(rows.begin(), rows.end(), std::back_inserter(picked), sample_cap, rng);
    rows = std::move(picked);
  }

  // compact cluster ids over the sample
  std::map<int, std::size_t> compact;
  for (auto r : rows) compact.emplace(labels[r], compact.size());
  const std::size_t k = compact.size();
  if (k < 2) throw MetricError("silhouette needs at least two clusters");

  std::vector<std::size_t> cluster(rows.size());
  std::vector<std::size_t> count(k, 0);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    cluster[i] = compact.at(labels[rows[i]]);
    ++count[cluster[i]];
  }

  std::vector<double> sum_to(k);
  double total = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (count[cluster[i]] < 2) continue;  // singleton: s = 0
    std::fill(sum_to.begin(), sum_to.end(), 0.0);
    const auto xi = X.row(rows[i]);
    for (std::size_t j = 0; j < rows.size(); ++j) {
      if (j == i) continue;
      sum_to[cluster[j]] += std::sqrt(squared_distance(xi, X.row(rows[j])));
    }
    const double a = sum_to[cluster[i]] / static_cast<double>(count[cluster[i]] - 1);
    double b = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < k; ++c) {
      if (c == cluster[i]) continue;
      b = std::min(b, sum_to[c] / static_cast<double>(count[c]));
    }
    const double denom = std::max(a, b);
    if (denom > 0.0) total += (b - a) / denom;
  }
  return total / static_cast<double>(rows.size());
}

double index_product(double dbi_value, double mia_value, double silhouette_value) {
  if (!(silhouette_value > 0.0)) throw MetricError("Ix undefined: silhouette <= 0");
  return dbi_value * mia_value / silhouette_value;
}

BinQuant evaluate_bin(const Matrix& X, std::span<const int> labels, const Matrix& centroids,
                      std::size_t sample_cap, std::uint64_t seed) {
  BinQuant q;
  q.n_bin = X.rows();
  q.dbi = dbi(X, labels, centroids);
  q.mia = mia(X, labels, centroids);
  q.silhouette = silhouette(X, labels, sample_cap, seed);
  q.valid = q.silhouette > 0.0;
  q.ix = q.valid ? index_product(q.dbi, q.mia, q.silhouette) : std::numeric_limits<double>::quiet_NaN();
  return q;
}

double combined_index(std::span<const BinIx> bins, std::size_t n_total) {
  if (bins.empty() || n_total == 0) throw MetricError("combined index needs at least one non-empty bin");
  std::size_t n_sum = 0;
  double weighted = 0.0;
  for (const auto& b : bins) {
    if (!std::isfinite(b.ix) || !(b.ix > 0.0)) throw MetricError("combined index: bin with non-positive Ix");
    n_sum += b.n_bin;
    weighted += static_cast<double>(b.n_bin) / static_cast<double>(n_total) * b.ix;
  }
  if (n_sum != n_total) throw MetricError("combined index: bin sizes do not sum to n_total");
  return std::log(weighted);
}

}  // namespace rdlp
