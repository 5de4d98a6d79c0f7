#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "generators.hpp"
#include "oracles.hpp"
#include "rdlp/error.hpp"
#include "rdlp/preprocess.hpp"
#include "rdlp/synthetic.hpp"

using namespace rdlp;

namespace {

HourlyValues constant(double v) {
  HourlyValues out;
  out.fill(v);
  return out;
}

DailyLoadProfile day(const std::string& id, const std::string& date, const HourlyValues& v) {
  return {id, parse_date(date), v};
}

double l2(const HourlyValues& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

TEST(Normalise, Examples) {
  EXPECT_EQ(*normalise(constant(2.0), NormalisationMethod::sa_norm), constant(1.0));
  EXPECT_EQ(*normalise(constant(2.0), NormalisationMethod::zero_one), constant(1.0));
  EXPECT_EQ(*normalise(constant(2.0), NormalisationMethod::none), constant(2.0));

  auto spike = constant(1.0);
  spike[18] = 5.0;
  HourlyValues expected{};
  expected[18] = 1.0;
  EXPECT_EQ(*normalise(spike, NormalisationMethod::deminning), expected);
}

TEST(Normalise, UndefinedDenominators) {
  const HourlyValues zero{};
  EXPECT_FALSE(normalise(zero, NormalisationMethod::unit_norm));
  EXPECT_FALSE(normalise(zero, NormalisationMethod::sa_norm));
  EXPECT_FALSE(normalise(zero, NormalisationMethod::zero_one));
  EXPECT_FALSE(normalise(constant(3.0), NormalisationMethod::deminning));
  EXPECT_TRUE(normalise(zero, NormalisationMethod::none));
}

TEST(Normalise, ParseNames) {
  for (auto m : {NormalisationMethod::none, NormalisationMethod::unit_norm, NormalisationMethod::deminning,
                 NormalisationMethod::zero_one, NormalisationMethod::sa_norm})
    EXPECT_EQ(parse_normalisation(to_string(m)), m);
  EXPECT_THROW(parse_normalisation("l1"), ConfigError);
}

TEST(Normalise, InvariantsOnRandomProfiles) {
  std::mt19937_64 rng(99);
  for (int i = 0; i < 1000; ++i) {
    const auto v = gen::profile_values(rng);
    const auto argmax = std::max_element(v.begin(), v.end()) - v.begin();

    const auto u = *normalise(v, NormalisationMethod::unit_norm);
    EXPECT_NEAR(l2(u), 1.0, 1e-9);
    EXPECT_EQ(std::max_element(u.begin(), u.end()) - u.begin(), argmax);

    const auto d = *normalise(v, NormalisationMethod::deminning);
    EXPECT_NEAR(std::accumulate(d.begin(), d.end(), 0.0), 1.0, 1e-9);
    EXPECT_EQ(*std::min_element(d.begin(), d.end()), 0.0);

    const auto z = *normalise(v, NormalisationMethod::zero_one);
    EXPECT_EQ(*std::max_element(z.begin(), z.end()), 1.0);
    EXPECT_GE(*std::min_element(z.begin(), z.end()), 0.0);
    EXPECT_EQ(std::max_element(z.begin(), z.end()) - z.begin(), argmax);

    const auto s = *normalise(v, NormalisationMethod::sa_norm);
    EXPECT_NEAR(std::accumulate(s.begin(), s.end(), 0.0) / kHours, 1.0, 1e-9);
    EXPECT_EQ(std::max_element(s.begin(), s.end()) - s.begin(), argmax);
  }
}

TEST(FilterZeros, DropsOnlyAllZeroProfiles) {
  auto partial = constant(1.0);
  partial[0] = 0.0;
  const ProfileSet set({day("A", "2014-01-01", constant(1.0)), day("A", "2014-01-02", HourlyValues{}),
                        day("B", "2014-01-01", partial)});
  EXPECT_EQ(filter_zeros(set, false).size(), 2u);
  EXPECT_EQ(filter_zeros(set, true).size(), 3u);
  const ProfileSet zeros({day("A", "2014-01-01", HourlyValues{})});
  EXPECT_THROW(filter_zeros(zeros, false), DataError);
}

TEST(NormaliseForClustering, KeptZerosBecomeZeroVectorsOthersExcluded) {
  const ProfileSet set({day("A", "2014-01-01", constant(2.0)), day("A", "2014-01-02", HourlyValues{}),
                        day("B", "2014-01-01", constant(1.0))});
  const auto unit = normalise_for_clustering(set, NormalisationMethod::unit_norm);
  EXPECT_EQ(unit.features.rows(), 3u);
  EXPECT_EQ(unit.excluded, 0u);
  for (double x : unit.features.row(1)) EXPECT_EQ(x, 0.0);

  // constant profiles cannot be de-minned
  const auto demin = normalise_for_clustering(set, NormalisationMethod::deminning);
  EXPECT_EQ(demin.features.rows(), 1u);
  EXPECT_EQ(demin.excluded, 2u);
  EXPECT_EQ(demin.source_rows, (std::vector<std::size_t>{1}));
}

TEST(Amc, ClosedForms) {
  std::vector<DailyLoadProfile> year;
  auto d = std::chrono::sys_days{std::chrono::year{2014} / 1 / 1};
  for (int i = 0; i < 365; ++i, d += std::chrono::days{1}) year.push_back({"A", d, constant(1.0)});
  EXPECT_NEAR(amc(year), 230.0 * 24 * 365 / 12, 1e-6);
  EXPECT_DOUBLE_EQ(amc(std::vector{day("A", "2014-01-01", constant(1.0))}), 460.0);
  EXPECT_EQ(amc(std::vector{day("A", "2014-01-01", HourlyValues{})}), 0.0);
  EXPECT_THROW(amc(std::vector<DailyLoadProfile>{}), DataError);
}

TEST(PrebinAmc, EdgesAreHalfOpenAndHouseholdsShareBins) {
  // One day of 1 A gives AMC 460, so with scale 1 and an edge at 460 the
  // household lands in the upper bin.
  AmcBinning binning{{0.0, 460.0, 1000.0}, 1.0};
  const ProfileSet set({day("A", "2014-01-01", constant(1.0)), day("B", "2014-01-01", constant(0.5)),
                        day("C", "2014-01-01", constant(1.0)), day("C", "2014-01-02", constant(2.0))});
  const auto bins = prebin_amc(set, binning);
  EXPECT_EQ(bins.n_bins, 3);
  EXPECT_EQ(bins.bins[0], 2);  // exactly on the edge
  EXPECT_EQ(bins.bins[1], 1);  // 230
  EXPECT_EQ(bins.bins[2], 3);  // 460 + 920
  EXPECT_EQ(bins.bins[2], bins.bins[3]);
  EXPECT_EQ(bins.rows_of(3), (std::vector<std::size_t>{2, 3}));
}

TEST(PrebinAmc, DefaultScaleConvertsToKilo) {
  // 1 A all year: 167 900 -> 167.9 with the default scale, bin [150, 400).
  std::vector<DailyLoadProfile> year;
  auto d = std::chrono::sys_days{std::chrono::year{2014} / 1 / 1};
  for (int i = 0; i < 365; ++i, d += std::chrono::days{1}) year.push_back({"A", d, constant(1.0)});
  const auto bins = prebin_amc(ProfileSet(year), AmcBinning{});
  EXPECT_EQ(bins.n_bins, 8);
  for (int b : bins.bins) EXPECT_EQ(b, 3);
}

TEST(PrebinAmc, RejectsBadEdges) {
  EXPECT_THROW(validate(AmcBinning{{0.0, 10.0, 10.0}, 1.0}), ConfigError);
  EXPECT_THROW(validate(AmcBinning{{5.0, 10.0}, 1.0}), ConfigError);
  EXPECT_THROW(validate(AmcBinning{{0.0, 10.0}, 0.0}), ConfigError);
  EXPECT_THROW(validate(AmcBinning{{}, 1.0}), ConfigError);
}

TEST(IntegralFeatures, ShapeAndMonotone) {
  std::mt19937_64 rng(4);
  std::vector<DailyLoadProfile> profiles;
  for (int i = 0; i < 50; ++i) profiles.push_back(gen::profile(rng));
  profiles.push_back(day("Z", "2014-01-01", HourlyValues{}));
  const ProfileSet set(profiles);
  const auto f = integral_features(set);
  ASSERT_EQ(f.cols(), 25u);
  ASSERT_EQ(f.rows(), set.size());
  for (std::size_t i = 0; i + 1 < set.size(); ++i) {
    for (std::size_t t = 1; t < kHours; ++t) EXPECT_GE(f(i, t), f(i, t - 1));
    EXPECT_DOUBLE_EQ(f(i, 24), peak_demand(set[i]));
  }
  for (double x : f.row(set.size() - 1)) EXPECT_EQ(x, 0.0);
}

TEST(PrebinIntegralKMeans, RecoversTwoSeparatedArchetypesDeterministically) {
  SyntheticSpec spec;
  spec.n_households = 20;
  spec.days = 10;
  spec.rng_seed = 8;
  Archetype morning{"morning", {}, 1.0, 1.2, 0.02};
  morning.shape.fill(0.2);
  morning.shape[7] = 3.0;
  Archetype evening{"evening", {}, 4.0, 5.0, 0.02};
  evening.shape.fill(0.2);
  evening.shape[20] = 3.0;
  spec.archetypes = {morning, evening};
  const auto data = generate_synthetic(spec);

  const auto a = prebin_integral_kmeans(data.profiles, {.n_bins = 2, .seed = 1});
  const auto b = prebin_integral_kmeans(data.profiles, {.n_bins = 2, .seed = 1});
  EXPECT_EQ(a.bins, b.bins);
  EXPECT_DOUBLE_EQ(oracle::adjusted_rand(a.bins, data.labels), 1.0);
  // bin 1 holds the lower-demand archetype
  for (std::size_t i = 0; i < a.bins.size(); ++i) EXPECT_EQ(a.bins[i], data.labels[i] == 0 ? 1 : 2);
}

TEST(PrebinIntegralKMeans, TooFewProfiles) {
  const ProfileSet set({day("A", "2014-01-01", constant(1.0))});
  EXPECT_THROW(prebin_integral_kmeans(set, {.n_bins = 2}), ParameterError);
}
