#pragma once

#include "rdlp/preprocess.hpp"
#include "rdlp/synthetic.hpp"

namespace bench {

// Unit-normalised synthetic profiles with a handful of distinct shapes.
inline rdlp::Matrix profiles(std::size_t households, std::size_t days) {
  rdlp::SyntheticSpec spec;
  spec.n_households = households;
  spec.days = days;
  spec.rng_seed = 1;
  for (int a = 0; a < 6; ++a) {
    rdlp::Archetype arch{"a" + std::to_string(a), {}, 0.5 + a, 1.0 + 2 * a, 0.1};
    arch.shape.fill(0.3);
    arch.shape[(4 * a + 6) % 24] = 2.0;
    arch.shape[(4 * a + 7) % 24] = 1.2;
    spec.archetypes.push_back(arch);
  }
  return rdlp::normalise_for_clustering(rdlp::generate_synthetic(spec).profiles, rdlp::NormalisationMethod::unit_norm)
      .features;
}

}  // namespace bench
