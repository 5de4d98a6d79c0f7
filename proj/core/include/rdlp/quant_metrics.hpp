#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "rdlp/matrix.hpp"

namespace rdlp {

// Cluster validity indices. Labels index rows of `centroids`; clusters
// without members are ignored.

/// Davies-Bouldin index: mean over clusters of max_{j != i} (S_i + S_j) / d(c_i, c_j)
/// with S_i the mean member-to-centroid distance. Throws MetricError with
/// fewer than two non-empty clusters or coinciding centroids.
double dbi(const Matrix& X, std::span<const int> labels, const Matrix& centroids);

/// Mean index adequacy: sqrt of the mean over clusters of the mean squared
/// member-to-centroid distance.
double mia(const Matrix& X, std::span<const int> labels, const Matrix& centroids);

inline constexpr std::size_t kDefaultSilhouetteSampleCap = 20000;

/// Mean silhouette width. When X has more than sample_cap rows the index is
/// computed on a seeded subsample of sample_cap rows. Singleton clusters
/// contribute 0. Throws MetricError with fewer than two clusters.
double silhouette(const Matrix& X, std::span<const int> labels,
                  std::size_t sample_cap = kDefaultSilhouetteSampleCap, std::uint64_t seed = 0);

/// Ix = dbi * mia / silhouette. Throws MetricError when silhouette <= 0.
double index_product(double dbi, double mia, double silhouette);

struct BinQuant {
  double dbi = 0.0;
  double mia = 0.0;
  double silhouette = 0.0;
  double ix = 0.0;
  bool valid = false;  ///< silhouette > 0, so ix is defined
  std::size_t n_bin = 0;
};

/// All three indices and Ix for one clustered bin. An undefined index
/// propagates as MetricError; a non-positive silhouette only clears `valid`.
BinQuant evaluate_bin(const Matrix& X, std::span<const int> labels, const Matrix& centroids,
                      std::size_t sample_cap = kDefaultSilhouetteSampleCap, std::uint64_t seed = 0);

struct BinIx {
  double ix = 0.0;
  std::size_t n_bin = 0;
};

/// CI = ln( sum_bins (n_bin / n_total) * ix ). Throws MetricError when the
/// bin sizes do not add up to n_total or any ix is not finite and positive.
double combined_index(std::span<const BinIx> bins, std::size_t n_total);

}  // namespace rdlp
