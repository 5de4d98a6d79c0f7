#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "rdlp/matrix.hpp"
#include "rdlp/profile.hpp"

namespace rdlp {

struct KMeansOptions {
  int max_iterations = 300;
  /// Converged when |shift| <= tolerance * |centroids| (Frobenius norms).
  double tolerance = 1e-6;
};

struct KMeansResult {
  std::vector<int> labels;
  Matrix centroids;  ///< centroid k is the mean of the rows labelled k
  int iterations = 0;
  bool converged = false;
  /// Within-cluster sum of squares after every update step.
  std::vector<double> objective_history;

  double inertia() const { return objective_history.empty() ? 0.0 : objective_history.back(); }
};

/// Lloyd's algorithm with k-means++ seeding. An empty cluster is re-seeded
/// with the point farthest from its centroid. Throws ParameterError when
/// m < 1 or m > X.rows().
KMeansResult kmeans(const Matrix& X, int m, std::uint64_t seed, const KMeansOptions& options = {});

/// Within-cluster sum of squared distances.
double kmeans_objective(const Matrix& X, std::span<const int> labels, const Matrix& centroids);

struct SomOptions {
  int epochs = 50;
};

struct SomResult {
  int side = 0;
  Matrix codebook;          ///< side*side rows, unit (r, c) at row r*side + c
  std::vector<int> labels;  ///< best-matching unit of every row of X
};

/// Index of the codebook row nearest to `x` (lowest index on ties).
int best_matching_unit(const Matrix& codebook, std::span<const double> x);

/// Batch self-organising map on a planar side x side grid. Gaussian
/// neighbourhood whose radius decays linearly from side/2 to 1.
SomResult som(const Matrix& X, int side, std::uint64_t seed, const SomOptions& options = {});

struct SomKMeansResult {
  SomResult map;
  KMeansResult unit_clusters;  ///< k-means over the codebook
  std::vector<int> labels;     ///< cluster of each row's BMU
};

/// SOM followed by k-means (k = m) on the codebook. Throws ParameterError
/// unless side * side > m.
SomKMeansResult som_kmeans(const Matrix& X, int side, int m, std::uint64_t seed,
                           const SomOptions& som_options = {}, const KMeansOptions& kmeans_options = {});

enum class Algorithm { kmeans, som, som_kmeans };

std::string_view to_string(Algorithm algorithm);
Algorithm parse_algorithm(std::string_view name);

struct ClusterParams {
  Algorithm algorithm = Algorithm::kmeans;
  int m = 0;  ///< cluster count (kmeans, som_kmeans)
  int s = 0;  ///< map side (som, som_kmeans)
  std::uint64_t seed = 0;
  KMeansOptions kmeans;
  SomOptions som;
};

/// Throws ParameterError: m >= 2 (kmeans, som_kmeans), s >= 2 (som,
/// som_kmeans), s*s > m (som_kmeans).
void validate(const ClusterParams& params);

/// Labels and the centroid of every cluster in feature space. The cluster
/// count is centroids.rows(); some clusters may have no members (SOM units).
struct Clustering {
  std::vector<int> labels;
  Matrix centroids;
};

Clustering cluster(const Matrix& X, const ClusterParams& params);

/// Member count of every cluster id in [0, n_clusters). Negative labels are
/// ignored.
std::vector<std::size_t> cluster_sizes(std::span<const int> labels, std::size_t n_clusters);

/// Representative daily load profiles: element-wise mean of the raw member
/// profiles of each cluster. Empty clusters get nullopt.
/// labels[i] refers to profiles[i]; a negative label means "not clustered".
std::vector<std::optional<HourlyValues>> compute_rdlp(std::span<const DailyLoadProfile> profiles,
                                                      std::span<const int> labels, std::size_t n_clusters);

}  // namespace rdlp
