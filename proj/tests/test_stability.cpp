#include <gtest/gtest.h>

#include "nadyn/nadyn.hpp"

using namespace nadyn;

TEST(Stability, RadiusStrictlyBelow) {
  auto X = FiniteMetricSpace::torus2d(5);
  EXPECT_EQ(radius_strictly_below(*X, Length(1, 5)), Length(1, 10));
  EXPECT_EQ(radius_strictly_below(*X, Length(2, 5)), Length(3, 10));
  EXPECT_EQ(radius_strictly_below(*X, Length(1, 10)), Length(1, 20));
  EXPECT_EQ(radius_strictly_below(*X, Length(1, 4)), Length(9, 40));
  EXPECT_THROW(radius_strictly_below(*X, Length(0)), Error);
}

TEST(Stability, MapForUnperturbedCatIsTheIdentity) {
  auto F = zoo::make("cat", {{"q", 5}}, 64);
  auto H = stability_map(F, F, Length(1, 20), 4);
  for (PointId x = 0; x < 25; ++x) EXPECT_EQ(H.assign[x].members(), std::vector<PointId>{x});
  EXPECT_EQ(H.max_size(), 1u);
  EXPECT_TRUE(H.domain().is_full());
  auto r = stability_check(F, GridMeasure::uniform(25), F, Length(2, 5), Length(1, 20), 4);
  EXPECT_TRUE(r.verdict);
  EXPECT_THROW(stability_check(F, GridMeasure::uniform(25), F, Length(1, 5), Length(2, 5), 4), Error);
}

TEST(Stability, MapValuesByDefinition) {
  auto F = zoo::make("rotation", {{"q", 8}}, 64);
  auto G = perturb_system(F, Length(1, 4), 12);
  const auto& X = *F.space();
  const Length ep(1, 8);
  auto H = stability_map(F, G, ep, 3);
  for (PointId x = 0; x < 8; ++x)
    for (PointId y = 0; y < 8; ++y) {
      bool in = true;
      for (std::int64_t n = -3; n <= 3; ++n) in = in && X.distance(evaluate(F, n, y), evaluate(G, n, x)) <= ep;
      EXPECT_EQ(H.assign[x].contains(y), in);
    }
}

TEST(Stability, RotationHasFatValues) {
  // Rotations: every y within eps' of x stays within eps' of it forever.
  auto F = zoo::make("rotation", {{"q", 8}}, 64);
  auto r = stability_check(F, GridMeasure::uniform(8), F, Length(1, 2), Length(1, 4), 4);
  EXPECT_TRUE(r.domain_full);
  EXPECT_FALSE(r.values_null);
  EXPECT_EQ(r.max_value_mass, Mass(5, 8));
  EXPECT_FALSE(r.verdict);
}

TEST(Stability, RefinementSequenceShrinks) {
  auto F = zoo::make("cat", {{"q", 5}}, 64);
  auto chain = refinement_sequence(F, F, Length(1, 5), 3, 4);
  ASSERT_FALSE(chain.empty());
  for (std::size_t i = 1; i < chain.size(); ++i) EXPECT_TRUE(chain[i].is_subset_of(chain[i - 1]));
  EXPECT_TRUE(chain.back().contains(3));
}

TEST(Walters, CatFivePipeline) {
  auto F = zoo::make("cat", {{"q", 5}}, 64);
  auto r = walters_pipeline(F, GridMeasure::uniform(25), Length(2, 5), F.space()->distance_values(), 20, 1234, 6);
  EXPECT_EQ(r.outcome, WaltersReport::Outcome::yes) << r.reason;
  EXPECT_EQ(r.e, Length(1, 5));
  EXPECT_EQ(r.eps_prime, Length(1, 20));
  EXPECT_EQ(r.stability.size(), 20u);
  EXPECT_EQ(r.max_H_size, 1u);
}

TEST(Walters, AtomicMeasureIsNotApplicable) {
  auto F = zoo::make("cat", {{"q", 5}}, 64);
  auto r = walters_pipeline(F, GridMeasure::dirac(25, 0), Length(2, 5), F.space()->distance_values(), 4, 1, 4);
  EXPECT_EQ(r.outcome, WaltersReport::Outcome::not_applicable);
  EXPECT_FALSE(r.reason.empty());
}

TEST(Walters, NonExpansiveSystemIsNotApplicable) {
  auto F = zoo::make("rotation", {{"q", 5}}, 64);
  auto r = walters_pipeline(F, GridMeasure::uniform(5), Length(2, 5), F.space()->distance_values(), 4, 1, 4);
  EXPECT_EQ(r.outcome, WaltersReport::Outcome::not_applicable);
}

TEST(Stability, StableImpliesPersistentOnSmallSample) {
  for (const auto& F : {zoo::make("cat", {{"q", 5}}, 64), zoo::make("rotation", {{"q", 6}}, 64)}) {
    auto mu = GridMeasure::uniform(F.size());
    for (const auto& delta : F.space()->distance_values()) {
      const Length eps = F.space()->distance_values().back();
      const auto ep = radius_strictly_below(*F.space(), eps);
      auto trials = perturbation_trials(F, delta, 4, 8);
      for (std::size_t t = 0; t < trials.systems.size(); ++t) {
        auto s = stability_check(F, mu, trials.systems[t], eps, ep, 4);
        if (!s.verdict) continue;
        PerturbationTrials one{{trials.systems[t]}, {trials.seeds[t]}};
        EXPECT_TRUE(persistence_with(F, eps, delta, s.H.domain(), one, 4).verdict);
      }
    }
  }
}
