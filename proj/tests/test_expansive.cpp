#include <gtest/gtest.h>

#include "nadyn/nadyn.hpp"
#include "oracles.hpp"

using namespace nadyn;

namespace {

std::vector<TimeVaryingSystem> small_zoo() {
  return {zoo::make("cat", {{"q", 5}}, 64),           zoo::make("rotation", {{"q", 6}, {"step", 1}}, 64),
          zoo::make("affine", {{"q", 7}}, 64),        zoo::make("cat_iso", {{"q", 5}, {"depth", 6}}, 64),
          zoo::make("alternate", {{"q", 5}}, 64),     zoo::make("identity", {{"q", 4}}, 64),
          zoo::make("cat", {{"q", 3}}, 64)};
}

// Random cover: each point joins a random nonempty subset of m members.
std::vector<PointSet> random_cover(std::size_t n, std::size_t m, Rng& rng) {
  std::vector<PointSet> sets(m, PointSet(n));
  for (PointId p = 0; p < n; ++p) {
    sets[uniform_index(rng, m)].insert(p);
    for (std::size_t a = 0; a < m; ++a)
      if (uniform_index(rng, 3) == 0) sets[a].insert(p);
  }
  for (auto& s : sets)
    if (s.empty()) s.insert(static_cast<PointId>(uniform_index(rng, n)));
  return sets;
}

}  // namespace

TEST(DynamicalBall, MatchesNaiveDefinition) {
  for (const auto& F : small_zoo())
    for (std::int64_t N = 0; N <= 3; ++N) {
      const OrbitTable orb(F, N);
      for (const auto& delta : F.space()->distance_values())
        for (PointId x = 0; x < F.size(); ++x)
          EXPECT_EQ(dynamical_ball(orb, *F.space(), x, delta), oracle::dynamical_ball(F, x, delta, N))
              << F.name() << " N=" << N << " delta=" << to_string(delta) << " x=" << x;
    }
}

TEST(Expansive, CatFiveHasConstantOneFifth) {
  auto F = zoo::make("cat", {{"q", 5}}, 64);
  auto mu = GridMeasure::uniform(25);
  auto r = expansive_verdict(F, mu, F.space()->distance_values(), 4);
  EXPECT_TRUE(r.verdict);
  EXPECT_EQ(r.constant, Length(1, 5));
  ASSERT_EQ(r.scans.size(), 2u);
  EXPECT_EQ(r.scans[0].max_mass, Mass(1, 25));
  EXPECT_EQ(r.scans[1].max_mass, Mass(1));
  EXPECT_TRUE(r.nonatomic);
}

TEST(Expansive, RotationIsNeverExpansiveAndBallsSitInside) {
  for (int q : {5, 8}) {
    auto F = zoo::make("rotation", {{"q", q}}, 64);
    auto r = expansive_verdict(F, GridMeasure::uniform(q), F.space()->distance_values(), 8);
    EXPECT_FALSE(r.verdict);
    EXPECT_FALSE(r.constant);
    for (const auto& s : r.scans) EXPECT_TRUE(s.open_ball_inside);
  }
}

TEST(Expansive, DiracMeasureIsReportedAtomic) {
  auto F = zoo::make("cat", {{"q", 5}}, 64);
  auto r = expansive_verdict(F, GridMeasure::dirac(25, 0), {Length(1, 5)}, 4);
  EXPECT_FALSE(r.nonatomic);
  EXPECT_FALSE(r.verdict);
}

TEST(Expansive, RejectsUnsortedGrid) {
  auto F = zoo::make("cat", {{"q", 5}}, 64);
  EXPECT_THROW(expansive_verdict(F, GridMeasure::uniform(25), {Length(2, 5), Length(1, 5)}, 4), Error);
}

TEST(Lebesgue, SingletonAndTrivialCovers) {
  auto X = FiniteMetricSpace::torus2d(5);
  auto c = generator_from_constant(*X, Length(1, 5));
  for (const auto& s : c.sets) EXPECT_EQ(s.size(), 1u);
  EXPECT_EQ(c.lebesgue, Length(1, 5));
  auto whole = make_cover(*X, {PointSet::full(25)});
  EXPECT_FALSE(whole.lebesgue);
  EXPECT_THROW(make_cover(*X, {PointSet::of(25, std::vector<PointId>{0})}), Error);
  auto halves = make_cover(*X, {X->ball(0, Length(1, 5), true), X->ball(0, Length(1, 5), true).complement()});
  EXPECT_EQ(halves.lebesgue, Length(1, 5));
}

TEST(Generator, ConstantCoverIsAGenerator) {
  auto F = zoo::make("cat", {{"q", 5}}, 64);
  auto r = is_mu_generator(F, GridMeasure::uniform(25), generator_from_constant(*F.space(), Length(1, 5)), 4);
  EXPECT_TRUE(r.verdict);
}

TEST(Generator, TrivialCoverFailsWithWitness) {
  auto F = zoo::make("rotation", {{"q", 5}}, 64);
  auto mu = GridMeasure::uniform(5);
  auto r = is_mu_generator(F, mu, make_cover(*F.space(), {PointSet::full(5)}), 2);
  EXPECT_FALSE(r.verdict);
  ASSERT_TRUE(r.witness_set);
  EXPECT_EQ(r.witness_sequence.size(), 5u);
  EXPECT_EQ(r.witness_mass, Mass(1));
}

TEST(Generator, ExhaustiveSearchMatchesFullEnumeration) {
  Rng rng(derive_seed(99, 0));
  int checked = 0, yes = 0;
  for (const auto& F : small_zoo()) {
    if (F.size() > 25) continue;
    auto mu = GridMeasure::uniform(F.size());
    for (int trial = 0; trial < 6; ++trial) {
      const std::size_t m = 2 + uniform_index(rng, 3);
      const std::int64_t N = m <= 3 ? 3 : 2;
      auto sets = random_cover(F.size(), m, rng);
      // Occasionally make the cover fine enough to generate.
      if (trial == 0) {
        sets.clear();
        for (PointId p = 0; p < F.size(); ++p) sets.push_back(PointSet::of(F.size(), std::vector<PointId>{p}));
        if (sets.size() > 7) continue;
      }
      const auto cover = make_cover(*F.space(), sets);
      const bool expect = oracle::is_mu_generator(F, mu, cover.sets, N);
      EXPECT_EQ(is_mu_generator(F, mu, cover, N).verdict, expect) << F.name() << " trial " << trial;
      ++checked;
      yes += expect;
    }
  }
  EXPECT_GT(checked, 20);
  EXPECT_GT(yes, 0);
}

TEST(Generator, SampledModeIsSeededAndBudgetIsEnforced) {
  auto F = zoo::make("cat", {{"q", 5}}, 64);
  auto mu = GridMeasure::uniform(25);
  auto cover = make_cover(*F.space(), {F.space()->ball(0, Length(1, 5), true),
                                       F.space()->ball(0, Length(1, 5), true).complement()});
  GeneratorOptions opt{GeneratorMode::sampled, 0, 200, 5};
  auto a = is_mu_generator(F, mu, cover, 3, std::nullopt, opt);
  auto b = is_mu_generator(F, mu, cover, 3, std::nullopt, opt);
  EXPECT_EQ(a.verdict, b.verdict);
  EXPECT_EQ(a.witness_sequence, b.witness_sequence);
  EXPECT_EQ(a.nodes, b.nodes);
  GeneratorOptions tiny;
  tiny.budget = 3;
  EXPECT_THROW(is_mu_generator(F, mu, generator_from_constant(*F.space(), Length(2, 5)), 3, std::nullopt, tiny), Error);
}

TEST(Expansive, WorkerCountDoesNotChangeResults) {
  auto F = zoo::make("cat", {{"q", 7}}, 64);
  auto mu = GridMeasure::uniform(49);
  set_workers(1);
  auto a = expansive_verdict(F, mu, F.space()->distance_values(), 6);
  set_workers(3);
  auto b = expansive_verdict(F, mu, F.space()->distance_values(), 6);
  set_workers(1);
  ASSERT_EQ(a.scans.size(), b.scans.size());
  for (std::size_t i = 0; i < a.scans.size(); ++i) {
    EXPECT_EQ(a.scans[i].max_mass, b.scans[i].max_mass);
    EXPECT_EQ(a.scans[i].witness, b.scans[i].witness);
  }
}
