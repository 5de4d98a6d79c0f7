#include "rdlp/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

#include "rdlp/error.hpp"

namespace rdlp {

namespace {

int nearest(const Matrix& centroids, std::span<const double> x, double* dist2 = nullptr) {
  int best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < centroids.rows(); ++k) {
    const double d = squared_distance(centroids.row(k), x);
    if (d < best_d) {
      best_d = d;
      best = static_cast<int>(k);
    }
  }
  if (dist2) *dist2 = best_d;
  return best;
}

Matrix kmeanspp_seed(const Matrix& X, int m, std::mt19937_64& rng) {
  const std::size_t n = X.rows();
  Matrix centroids;
  std::uniform_int_distribution<std::size_t> uniform(0, n - 1);
  centroids.append_row(X.row(uniform(rng)));

  std::vector<double> d2(n);
  for (std::size_t i = 0; i < n; ++i) d2[i] = squared_distance(X.row(i), centroids.row(0));

  for (int c = 1; c < m; ++c) {
    const double total = std::accumulate(d2.begin(), d2.end(), 0.0);
    std::size_t next = 0;
    if (total <= 0.0) {
      next = uniform(rng);
    } else {
      std::uniform_real_distribution<double> u(0.0, total);
      const double r = u(rng);
      double cum = 0.0;
      next = n - 1;
      for (std::size_t i = 0; i < n; ++i) {
        cum += d2[i];
        if (r < cum && d2[i] > 0.0) {
          next = i;
          break;
        }
      }
    }
    centroids.append_row(X.row(next));
    const auto added = centroids.row(static_cast<std::size_t>(c));
    for (std::size_t i = 0; i < n; ++i) d2[i] = std::min(d2[i], squared_distance(X.row(i), added));
  }
  return centroids;
}

// Moves the farthest points of multi-member clusters into empty clusters.
void reseed_empty(const Matrix& X, std::vector<int>& labels, Matrix& centroids) {
  const std::size_t m = centroids.rows();
  auto counts = cluster_sizes(labels, m);
  for (std::size_t c = 0; c < m; ++c) {
    if (counts[c] != 0) continue;
    std::size_t far = X.rows();
    double far_d = -1.0;
    for (std::size_t i = 0; i < X.rows(); ++i) {
      const auto own = static_cast<std::size_t>(labels[i]);
      if (counts[own] < 2) continue;
      const double d = squared_distance(X.row(i), centroids.row(own));
      if (d > far_d) {
        far_d = d;
        far = i;
      }
    }
    if (far == X.rows()) break;  // fewer rows than clusters; cannot happen when m <= n
    --counts[static_cast<std::size_t>(labels[far])];
    labels[far] = static_cast<int>(c);
    counts[c] = 1;
    auto dst = centroids.row(c);
    const auto src = X.row(far);
    std::copy(src.begin(), src.end(), dst.begin());
  }
}

Matrix cluster_means(const Matrix& X, std::span<const int> labels, const Matrix& previous) {
  Matrix means(previous.rows(), X.cols());
  std::vector<std::size_t> counts(previous.rows(), 0);
  for (std::size_t i = 0; i < X.rows(); ++i) {
    const auto k = static_cast<std::size_t>(labels[i]);
    auto dst = means.row(k);
    const auto src = X.row(i);
    for (std::size_t j = 0; j < X.cols(); ++j) dst[j] += src[j];
    ++counts[k];
  }
  for (std::size_t k = 0; k < means.rows(); ++k) {
    auto dst = means.row(k);
    if (counts[k] == 0) {
      const auto old = previous.row(k);
      std::copy(old.begin(), old.end(), dst.begin());
      continue;
    }
    for (double& v : dst) v /= static_cast<double>(counts[k]);
  }
  return means;
}

}  // namespace

double kmeans_objective(const Matrix& X, std::span<const int> labels, const Matrix& centroids) {
  double total = 0.0;
  for (std::size_t i = 0; i < X.rows(); ++i)
    total += squared_distance(X.row(i), centroids.row(static_cast<std::size_t>(labels[i])));
  return total;
}

KMeansResult kmeans(const Matrix& X, int m, std::uint64_t seed, const KMeansOptions& options) {
  if (m < 1) throw ParameterError("kmeans: m must be >= 1");
  if (static_cast<std::size_t>(m) > X.rows()) {
    throw ParameterError("kmeans: m = " + std::to_string(m) + " exceeds row count " +
                         std::to_string(X.rows()));
  }
  std::mt19937_64 rng(seed);
  KMeansResult result;
  result.centroids = kmeanspp_seed(X, m, rng);
  result.labels.assign(X.rows(), -1);

  for (int it = 0; it < options.max_iterations; ++it) {
    bool changed = false;
    for (std::size_t i = 0; i < X.rows(); ++i) {
      const int k = nearest(result.centroids, X.row(i));
      if (k != result.labels[i]) {
        result.labels[i] = k;
        changed = true;
      }
    }
    if (it > 0 && !changed) {
      result.converged = true;
      break;
    }
    reseed_empty(X, result.labels, result.centroids);
    Matrix updated = cluster_means(X, result.labels, result.centroids);

    double shift = 0.0;
    double norm = 0.0;
    for (std::size_t k = 0; k < updated.rows(); ++k) {
      shift += squared_distance(updated.row(k), result.centroids.row(k));
      for (double v : updated.row(k)) norm += v * v;
    }
    result.centroids = std::move(updated);
    result.iterations = it + 1;
    result.objective_history.push_back(kmeans_objective(X, result.labels, result.centroids));
    if (std::sqrt(shift) <= options.tolerance * std::sqrt(norm)) {
      result.converged = true;
      break;
    }
  }
  return result;
}

int best_matching_unit(const Matrix& codebook, std::span<const double> x) { return nearest(codebook, x); }

SomResult som(const Matrix& X, int side, std::uint64_t seed, const SomOptions& options) {
  if (side < 2) throw ParameterError("som: side must be >= 2");
  if (X.empty()) throw ParameterError("som: empty input");
  if (options.epochs < 1) throw ParameterError("som: epochs must be >= 1");

  const auto units = static_cast<std::size_t>(side) * static_cast<std::size_t>(side);
  const std::size_t dim = X.cols();
  std::mt19937_64 rng(seed);

  // Codebook starts at distinct sample rows where possible.
  std::vector<std::size_t> order(X.rows());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  SomResult result;
  result.side = side;
  for (std::size_t u = 0; u < units; ++u) result.codebook.append_row(X.row(order[u % order.size()]));

  // Squared grid distance between units.
  std::vector<double> grid_d2(units * units);
  for (std::size_t a = 0; a < units; ++a) {
    for (std::size_t b = 0; b < units; ++b) {
      const double dr = static_cast<double>(a / side) - static_cast<double>(b / side);
      const double dc = static_cast<double>(a % side) - static_cast<double>(b % side);
      grid_d2[a * units + b] = dr * dr + dc * dc;
    }
  }

  const double r0 = std::max(1.0, side / 2.0);
  Matrix sums(units, dim);
  std::vector<double> counts(units);
  std::vector<double> h(units);
  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    const double frac = options.epochs > 1 ? static_cast<double>(epoch) / (options.epochs - 1) : 1.0;
    const double radius = r0 + (1.0 - r0) * frac;

    sums = Matrix(units, dim);
    std::fill(counts.begin(), counts.end(), 0.0);
    for (std::size_t i = 0; i < X.rows(); ++i) {
      const auto bmu = static_cast<std::size_t>(nearest(result.codebook, X.row(i)));
      auto dst = sums.row(bmu);
      const auto src = X.row(i);
      for (std::size_t j = 0; j < dim; ++j) dst[j] += src[j];
      counts[bmu] += 1.0;
    }

    Matrix next(units, dim);
    for (std::size_t u = 0; u < units; ++u) {
      double weight = 0.0;
      auto dst = next.row(u);
      for (std::size_t v = 0; v < units; ++v) {
        if (counts[v] == 0.0) continue;
        const double hv = std::exp(-grid_d2[u * units + v] / (2.0 * radius * radius));
        weight += hv * counts[v];
        const auto src = sums.row(v);
        for (std::size_t j = 0; j < dim; ++j) dst[j] += hv * src[j];
      }
      if (weight > 0.0) {
        for (double& x : dst) x /= weight;
      } else {
        const auto old = result.codebook.row(u);
        std::copy(old.begin(), old.end(), dst.begin());
      }
    }
    result.codebook = std::move(next);
  }

  result.labels.resize(X.rows());
  for (std::size_t i = 0; i < X.rows(); ++i) result.labels[i] = nearest(result.codebook, X.row(i));
  return result;
}

SomKMeansResult som_kmeans(const Matrix& X, int side, int m, std::uint64_t seed, const SomOptions& som_options,
                           const KMeansOptions& kmeans_options) {
  if (static_cast<long>(side) * side <= m) {
    throw ParameterError("som_kmeans: map of " + std::to_string(side) + "x" + std::to_string(side) +
                         " units cannot be clustered into m = " + std::to_string(m) + " (needs s^2 > m)");
  }
  SomKMeansResult result;
  result.map = som(X, side, seed, som_options);
  result.unit_clusters = kmeans(result.map.codebook, m, seed, kmeans_options);
  result.labels.resize(X.rows());
  for (std::size_t i = 0; i < X.rows(); ++i)
    result.labels[i] = result.unit_clusters.labels[static_cast<std::size_t>(result.map.labels[i])];
  return result;
}

std::string_view to_string(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::kmeans: return "kmeans";
    case Algorithm::som: return "som";
    case Algorithm::som_kmeans: return "som_kmeans";
  }
  return "?";
}

Algorithm parse_algorithm(std::string_view name) {
  if (name == "kmeans") return Algorithm::kmeans;
  if (name == "som") return Algorithm::som;
  if (name == "som_kmeans") return Algorithm::som_kmeans;
  throw ParameterError("unknown algorithm '" + std::string(name) + "'");
}

void validate(const ClusterParams& p) {
  const bool needs_m = p.algorithm != Algorithm::som;
  const bool needs_s = p.algorithm != Algorithm::kmeans;
  if (needs_m && p.m < 2) throw ParameterError("m must be >= 2");
  if (needs_s && p.s < 2) throw ParameterError("s must be >= 2");
  if (p.algorithm == Algorithm::som_kmeans && static_cast<long>(p.s) * p.s <= p.m) {
    throw ParameterError("som_kmeans needs s^2 > m (s = " + std::to_string(p.s) + ", m = " + std::to_string(p.m) +
                         ")");
  }
}

Clustering cluster(const Matrix& X, const ClusterParams& params) {
  validate(params);
  switch (params.algorithm) {
    case Algorithm::kmeans: {
      auto r = kmeans(X, params.m, params.seed, params.kmeans);
      return {std::move(r.labels), std::move(r.centroids)};
    }
    case Algorithm::som: {
      auto r = som(X, params.s, params.seed, params.som);
      return {std::move(r.labels), std::move(r.codebook)};
    }
    case Algorithm::som_kmeans: {
      auto r = som_kmeans(X, params.s, params.m, params.seed, params.som, params.kmeans);
      return {std::move(r.labels), std::move(r.unit_clusters.centroids)};
    }
  }
  throw ParameterError("unknown algorithm");
}

std::vector<std::size_t> cluster_sizes(std::span<const int> labels, std::size_t n_clusters) {
  std::vector<std::size_t> sizes(n_clusters, 0);
  for (int l : labels) {
    if (l < 0) continue;
    if (static_cast<std::size_t>(l) >= n_clusters) throw ParameterError("label out of range");
    ++sizes[static_cast<std::size_t>(l)];
  }
  return sizes;
}

std::vector<std::optional<HourlyValues>> compute_rdlp(std::span<const DailyLoadProfile> profiles,
                                                      std::span<const int> labels, std::size_t n_clusters) {
  if (labels.size() != profiles.size()) throw ParameterError("compute_rdlp: labels do not cover the profiles");
  std::vector<HourlyValues> sums(n_clusters, HourlyValues{});
  const auto sizes = cluster_sizes(labels, n_clusters);
  for (std::size_t i = 0; i < profiles.size(); ++i) {
    if (labels[i] < 0) continue;
    auto& acc = sums[static_cast<std::size_t>(labels[i])];
    for (std::size_t t = 0; t < kHours; ++t) acc[t] += profiles[i].values[t];
  }
  std::vector<std::optional<HourlyValues>> rdlps(n_clusters);
  for (std::size_t k = 0; k < n_clusters; ++k) {
    if (sizes[k] == 0) continue;
    HourlyValues mean = sums[k];
    for (double& v : mean) v /= static_cast<double>(sizes[k]);
    rdlps[k] = mean;
  }
  return rdlps;
}

}  // namespace rdlp
