#include <gtest/gtest.h>

#include "nadyn/nadyn.hpp"
#include "oracles.hpp"

using namespace nadyn;

namespace {

std::vector<TimeVaryingSystem> systems() {
  return {zoo::make("cat", {{"q", 5}}, 64), zoo::make("rotation", {{"q", 7}, {"step", 2}}, 64),
          zoo::make("alternate", {{"q", 4}}, 64), zoo::make("affine", {{"q", 5}}, 64),
          zoo::make("cat_iso", {{"q", 4}, {"depth", 5}}, 64)};
}

// Sequence through x0 whose every entry is moved at most one grid step from the true orbit.
PseudoOrbit jittered(const TimeVaryingSystem& F, PointId x0, std::int64_t lo, std::int64_t hi, Rng& rng) {
  PseudoOrbit p;
  p.lo = lo;
  for (std::int64_t n = lo; n <= hi; ++n) {
    const auto c = evaluate(F, n, x0);
    const auto near = F.space()->ball(c, F.space()->distance_values().front(), true).members();
    p.points.push_back(n == 0 ? x0 : near[uniform_index(rng, near.size())]);
  }
  return p;
}

}  // namespace

TEST(PseudoOrbit, FromEntriesRequiresContiguousRangeThroughZero) {
  auto p = PseudoOrbit::from_entries({{-1, 3}, {0, 4}, {1, 5}});
  EXPECT_EQ(p.lo, -1);
  EXPECT_EQ(p.hi(), 1);
  EXPECT_EQ(p.base(), 4u);
  EXPECT_THROW(PseudoOrbit::from_entries({{-1, 3}, {1, 5}}), Error);
  EXPECT_THROW(PseudoOrbit::from_entries({{1, 3}, {2, 5}}), Error);
}

TEST(PseudoOrbit, ClausesMatchDefinition) {
  Rng rng(11);
  for (const auto& F : systems())
    for (int t = 0; t < 40; ++t) {
      const auto x0 = static_cast<PointId>(uniform_index(rng, F.size()));
      auto seq = jittered(F, x0, -3, 3, rng);
      for (const auto& delta : F.space()->distance_values()) {
        const auto c = is_pseudo_orbit(F, seq, delta);
        EXPECT_EQ(c.ok, oracle::is_pseudo_orbit(F, seq, delta));
        if (!c.ok) EXPECT_TRUE(c.violation);
      }
    }
}

TEST(PseudoOrbit, TrueOrbitsAreShadowedByTheirBase) {
  for (const auto& F : systems())
    for (PointId x = 0; x < F.size(); ++x) {
      auto seq = true_orbit(F, x, 4);
      EXPECT_TRUE(is_pseudo_orbit(F, seq, F.space()->distance_values().front()).ok);
      auto r = shadowing_point(F, seq, Length(1, 100));
      ASSERT_TRUE(r.point);
      EXPECT_EQ(evaluate(F, 0, *r.point), x);
      EXPECT_EQ(r.best_sup, Length(0));
    }
}

TEST(ShadowingPoint, MatchesNaiveScan) {
  Rng rng(5);
  int with = 0, without = 0;
  for (const auto& F : systems())
    for (int t = 0; t < 60; ++t) {
      const auto x0 = static_cast<PointId>(uniform_index(rng, F.size()));
      const std::int64_t N = 1 + static_cast<std::int64_t>(uniform_index(rng, 3));
      auto seq = jittered(F, x0, -N, N, rng);
      for (const auto& eps : F.space()->distance_values()) {
        const auto fast = shadowing_point(F, seq, eps);
        const auto [slow, best] = oracle::shadowing_point(F, seq, eps);
        EXPECT_EQ(fast.point, slow);
        if (!fast.point) {
          EXPECT_EQ(fast.best_sup, best);
          EXPECT_EQ(oracle::tracking_sup(F, seq, fast.best_point), best);
          ++without;
        } else {
          ++with;
        }
      }
    }
  EXPECT_GT(with, 0);
  EXPECT_GT(without, 0);
}

TEST(Perturbation, StaysDeltaCloseAndIsSeeded) {
  for (const auto& F : systems())
    for (const auto& delta : F.space()->distance_values()) {
      auto G1 = perturb_system(F, delta, 42);
      auto G2 = perturb_system(F, delta, 42);
      EXPECT_TRUE(same_schedule(G1, G2));
      EXPECT_LT(system_distance(F, G1).p, delta);
    }
  auto F = zoo::make("cat", {{"q", 5}}, 64);
  EXPECT_TRUE(same_schedule(perturb_system(F, Length(1, 5), 3), F));
  bool moved = false;
  for (std::uint64_t s = 0; s < 5; ++s) moved |= !same_schedule(perturb_system(F, Length(2, 5), s), F);
  EXPECT_TRUE(moved);
}

TEST(Perturbation, TrialSeedsAreDerived) {
  auto F = zoo::make("rotation", {{"q", 8}}, 64);
  auto t = perturbation_trials(F, Length(1, 4), 4, 77);
  ASSERT_EQ(t.seeds.size(), 4u);
  for (std::uint64_t i = 0; i < 4; ++i) {
    EXPECT_EQ(t.seeds[i], derive_seed(77, i));
    EXPECT_TRUE(same_schedule(t.systems[i], perturb_system(F, Length(1, 4), t.seeds[i])));
  }
}

TEST(Persistence, UnperturbedSystemPersists) {
  auto F = zoo::make("rotation", {{"q", 5}}, 64);
  auto r = persistence_verdict(F, GridMeasure::uniform(5), Length(1, 5), Length(1, 5), 5, 1, 6);
  EXPECT_TRUE(r.verdict);
  EXPECT_EQ(r.trial_seeds.size(), 5u);
  EXPECT_TRUE(r.B.is_full());
}

TEST(Persistence, ExclusionShrinksB) {
  auto F = zoo::make("rotation", {{"q", 5}}, 64);
  auto ex = PointSet::of(5, std::vector<PointId>{2});
  auto r = persistence_verdict(F, GridMeasure::uniform(5), Length(1, 5), Length(1, 5), 2, 1, 4, std::nullopt, ex);
  EXPECT_EQ(r.B.size(), 4u);
  // Excluding a non-negligible set is not allowed.
  auto big = PointSet::of(5, std::vector<PointId>{0, 1});
  EXPECT_THROW(persistence_verdict(F, GridMeasure::uniform(5), Length(1, 5), Length(1, 5), 2, 1, 4, std::nullopt, big),
               Error);
}

TEST(Shadowing, DriftPseudoOrbitsAreValid) {
  for (const auto& F : systems())
    for (const auto& delta : F.space()->distance_values())
      for (PointId x = 0; x < F.size(); x += 3) EXPECT_TRUE(is_pseudo_orbit(F, drift_pseudo_orbit(F, x, delta, 4), delta).ok);
}

TEST(Shadowing, ShadowingImpliesPersistenceSeedMatched) {
  int runs = 0;
  for (const auto& F : systems())
    for (const auto& delta : F.space()->distance_values())
      for (const auto& eps : F.space()->distance_values()) {
        auto mu = GridMeasure::uniform(F.size());
        auto s = shadowing_verdict(F, mu, eps, delta, std::nullopt, 3, 9, 3);
        auto p = persistence_verdict(F, mu, eps, delta, 3, 9, 3);
        if (s.verdict) EXPECT_TRUE(p.verdict) << F.name();
        ++runs;
      }
  EXPECT_GT(runs, 10);
}

TEST(Shadowing, EpsAboveDiameterAlwaysShadows) {
  auto F = zoo::make("rotation", {{"q", 8}}, 64);
  auto r = shadowing_verdict(F, GridMeasure::uniform(8), Length(1), Length(1, 4), std::nullopt, 5, 3, 4);
  EXPECT_TRUE(r.verdict);
  EXPECT_GT(r.tested, 8u);
}

TEST(Shadowing, RejectsNonPseudoOrbits) {
  auto F = zoo::make("cat", {{"q", 5}}, 64);
  ShadowingInputs in{perturbation_trials(F, Length(1, 5), 1, 0), {PseudoOrbit{0, {0, 7}}}, {"random"}};
  EXPECT_THROW(shadowing_with(F, Length(1, 5), Length(1, 5), PointSet::full(25), in, 1), Error);
}
