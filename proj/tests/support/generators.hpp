#pragma once
// Random instances for property tests.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "rdlp/matrix.hpp"
#include "rdlp/profile.hpp"
#include "oracles.hpp"

namespace gen {

struct Instance {
  rdlp::Matrix X;
  oracle::Rows rows;
  std::vector<int> labels;
  rdlp::Matrix centroids;  // member means
  oracle::Rows centroid_rows;
  int k = 0;
};

/// n points in d dimensions around k random centres; every cluster gets at
/// least two members. Centroids are member means.
inline Instance clustered(std::mt19937_64& rng, std::size_t n, std::size_t d, int k, double spread = 0.5) {
  std::normal_distribution<double> noise(0.0, spread);
  std::uniform_real_distribution<double> centre(-5.0, 5.0);
  std::vector<std::vector<double>> centres(k, std::vector<double>(d));
  for (auto& c : centres)
    for (auto& x : c) x = centre(rng);

  Instance inst;
  inst.k = k;
  std::uniform_int_distribution<int> pick(0, k - 1);
  for (std::size_t i = 0; i < n; ++i) {
    const int c = i < static_cast<std::size_t>(2 * k) ? static_cast<int>(i) % k : pick(rng);
    std::vector<double> row(d);
    for (std::size_t j = 0; j < d; ++j) row[j] = centres[c][j] + noise(rng);
    inst.X.append_row(row);
    inst.rows.push_back(row);
    inst.labels.push_back(c);
  }
  inst.centroids = rdlp::Matrix(k, d);
  std::vector<int> count(k, 0);
  for (std::size_t i = 0; i < n; ++i) {
    ++count[inst.labels[i]];
    for (std::size_t j = 0; j < d; ++j) inst.centroids(inst.labels[i], j) += inst.rows[i][j];
  }
  for (int c = 0; c < k; ++c) {
    std::vector<double> row(d);
    for (std::size_t j = 0; j < d; ++j) row[j] = inst.centroids(c, j) /= count[c];
    inst.centroid_rows.push_back(row);
  }
  return inst;
}

/// Non-negative profile with a random baseline and a few random spikes.
inline rdlp::HourlyValues profile_values(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> base(0.0, 2.0), spike(0.0, 6.0);
  std::uniform_int_distribution<int> hour(0, 23), n_spikes(0, 3);
  rdlp::HourlyValues v{};
  for (auto& x : v) x = base(rng);
  for (int s = n_spikes(rng); s > 0; --s) v[hour(rng)] += spike(rng);
  return v;
}

inline rdlp::DailyLoadProfile profile(std::mt19937_64& rng, std::string id = "H1",
                                      rdlp::Date date = rdlp::Date{std::chrono::year{2014}, std::chrono::March,
                                                                   std::chrono::day{2}}) {
  return {std::move(id), date, profile_values(rng)};
}

inline std::vector<double> to_vector(const rdlp::HourlyValues& v) { return {v.begin(), v.end()}; }

}  // namespace gen
