#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rdlp/profile.hpp"

namespace rdlp {

/// A planted consumption behaviour: shape template scaled by a random
/// amplitude with additive Gaussian noise.
struct Archetype {
  std::string name;
  HourlyValues shape{};
  double amplitude_min = 1.0;
  double amplitude_max = 1.0;
  double noise = 0.0;  ///< standard deviation of per-hour noise, Amperes
};

struct SyntheticSpec {
  std::size_t n_households = 1;
  std::size_t days = 1;
  Date start_date{std::chrono::year{2014}, std::chrono::January, std::chrono::day{1}};
  std::vector<Archetype> archetypes;
  std::uint64_t rng_seed = 0;
};

struct SyntheticData {
  ProfileSet profiles;
  /// Archetype index of every profile, aligned with `profiles`.
  std::vector<int> labels;
};

/// Throws ParameterError on an invalid spec.
void validate(const SyntheticSpec& spec);

/// Household-major, day-minor. Each household draws one archetype uniformly;
/// each day is amplitude * shape + noise, clamped at 0. Deterministic per seed.
SyntheticData generate_synthetic(const SyntheticSpec& spec);

}  // namespace rdlp
