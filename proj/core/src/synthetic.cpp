#include "rdlp/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

#include "rdlp/error.hpp"

namespace rdlp {

void validate(const SyntheticSpec& spec) {
  if (spec.n_households < 1) throw ParameterError("synthetic: n_households must be >= 1");
  if (spec.days < 1) throw ParameterError("synthetic: days must be >= 1");
  if (spec.archetypes.empty()) throw ParameterError("synthetic: at least one archetype is required");
  if (!spec.start_date.ok()) throw ParameterError("synthetic: invalid start_date");
  for (const auto& a : spec.archetypes) {
    for (double v : a.shape) {
      if (!std::isfinite(v) || v < 0.0)
        throw ParameterError("synthetic: archetype '" + a.name + "' has a negative or non-finite shape entry");
    }
    if (!(a.noise >= 0.0)) throw ParameterError("synthetic: archetype '" + a.name + "' noise must be >= 0");
    if (!(a.amplitude_min >= 0.0) || !(a.amplitude_max >= a.amplitude_min))
      throw ParameterError("synthetic: archetype '" + a.name + "' needs 0 <= amplitude_min <= amplitude_max");
  }
}

SyntheticData generate_synthetic(const SyntheticSpec& spec) {
  validate(spec);
  std::mt19937_64 rng(spec.rng_seed);
  std::uniform_int_distribution<std::size_t> pick(0, spec.archetypes.size() - 1);

  std::vector<DailyLoadProfile> profiles;
  std::vector<int> labels;
  profiles.reserve(spec.n_households * spec.days);
  labels.reserve(spec.n_households * spec.days);

  const std::chrono::sys_days start{spec.start_date};
  for (std::size_t h = 0; h < spec.n_households; ++h) {
    const std::size_t k = pick(rng);
    const Archetype& a = spec.archetypes[k];
    char id[32];
    std::snprintf(id, sizeof id, "H%05zu", h + 1);
    std::uniform_real_distribution<double> amplitude(a.amplitude_min, a.amplitude_max);
    std::normal_distribution<double> noise(0.0, a.noise);
    for (std::size_t d = 0; d < spec.days; ++d) {
      DailyLoadProfile p;
      p.household_id = id;
      p.date = Date{start + std::chrono::days{static_cast<long>(d)}};
      const double amp = a.amplitude_min == a.amplitude_max ? a.amplitude_min : amplitude(rng);
      for (std::size_t t = 0; t < kHours; ++t) {
        const double eps = a.noise > 0.0 ? noise(rng) : 0.0;
        p.values[t] = std::max(0.0, amp * a.shape[t] + eps);
      }
      profiles.push_back(std::move(p));
      labels.push_back(static_cast<int>(k));
    }
  }
  return {ProfileSet(std::move(profiles)), std::move(labels)};
}

}  // namespace rdlp
