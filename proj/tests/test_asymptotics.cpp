#include <gtest/gtest.h>

#include "nadyn/nadyn.hpp"
#include "oracles.hpp"

using namespace nadyn;

TEST(LimitSets, RotationVisitsEverythingIdentityStays) {
  auto R = zoo::make("rotation", {{"q", 5}}, 64);
  auto I = zoo::make("identity", {{"q", 5}}, 64);
  const TailWindow w{12, 6};
  for (PointId x = 0; x < 5; ++x) {
    auto om = limit_set(R, x, LimitKind::omega, w);
    EXPECT_TRUE(om.set.is_full());
    EXPECT_TRUE(om.stabilized);
    EXPECT_TRUE(limit_set(R, x, LimitKind::alpha, w).set.is_full());
    EXPECT_EQ(limit_set(I, x, LimitKind::omega, w).set.members(), std::vector<PointId>{x});
  }
  EXPECT_THROW(limit_set(R, 0, LimitKind::omega, TailWindow{4, 5}), Error);
}

TEST(LimitSets, ShortTailIsFlaggedUnstable) {
  auto R = zoo::make("rotation", {{"q", 8}}, 64);
  auto om = limit_set(R, 0, LimitKind::omega, TailWindow{4, 2});
  EXPECT_EQ(om.set.size(), 3u);
  EXPECT_FALSE(om.stabilized);
}

TEST(Periodic, CatFivePeriodicSets) {
  auto F = zoo::make("cat", {{"q", 5}}, 64);
  const auto& X = *F.space();
  EXPECT_EQ(periodic_points(F, 1, 6).members(), std::vector<PointId>{X.torus_point(0, 0)});
  auto per2 = periodic_points(F, 2, 6);
  EXPECT_EQ(per2.size(), 5u);
  EXPECT_TRUE(per2.contains(X.torus_point(1, 2)));
  EXPECT_TRUE(per2.contains(X.torus_point(4, 3)));
  EXPECT_EQ(periodic_points(F, 3, 6).size(), 1u);
  auto mu = GridMeasure::uniform(25);
  EXPECT_TRUE(aperiodicity_verdict(F, mu, 1, 6).verdict);
  auto r = aperiodicity_verdict(F, mu, 3, 6);
  EXPECT_FALSE(r.verdict);
  EXPECT_EQ(r.masses, (std::vector<Mass>{Mass(1, 25), Mass(5, 25), Mass(1, 25)}));
}

TEST(Periodic, DefinitionCheckedDirectly) {
  auto F = zoo::make("cat_iso", {{"q", 5}, {"depth", 6}}, 64);
  for (std::int64_t k = 1; k <= 3; ++k) {
    auto per = periodic_points(F, k, 9);
    for (PointId p = 0; p < F.size(); ++p) {
      bool ok = true;
      for (std::int64_t i = -(9 / k); i <= 9 / k; ++i)
        for (std::int64_t j = 0; j < k; ++j) ok = ok && evaluate(F, i * k + j, p) == evaluate(F, j, p);
      EXPECT_EQ(per.contains(p), ok);
    }
  }
}

TEST(Converging, CellUnionMatchesNaiveUnionAndContainsA) {
  for (const auto& F : {zoo::make("cat", {{"q", 3}}, 64), zoo::make("rotation", {{"q", 5}}, 64),
                        zoo::make("identity", {{"q", 4}}, 64), zoo::make("cat_iso", {{"q", 3}, {"depth", 4}}, 64),
                        zoo::make("alternate", {{"q", 3}}, 64)}) {
    for (std::int64_t n : {1, 3, 10}) {
      const TailWindow w{6, 3};
      auto r = converging_set(F, n, w);
      EXPECT_EQ(r.cell_union, oracle::cell_union(F, n, 3, 6)) << F.name() << " n=" << n;
      EXPECT_TRUE(r.contained);
    }
  }
}

TEST(Converging, SemiorbitCellByDefinition) {
  auto F = zoo::make("cat", {{"q", 5}}, 64);
  const auto& X = *F.space();
  for (PointId x : {0u, 7u})
    for (PointId y : {0u, 13u}) {
      auto c = semiorbit_cell(F, x, y, 5, 1, 4);
      for (PointId z = 0; z < 25; ++z) {
        bool ok = true;
        for (std::int64_t i = 1; i <= 4; ++i)
          ok = ok && X.distance(evaluate(F, -i, z), x) <= Length(1, 5) && X.distance(evaluate(F, i, z), y) <= Length(1, 5);
        EXPECT_EQ(c.cell.contains(z), ok);
      }
      EXPECT_FALSE(c.below_resolution);
    }
  EXPECT_TRUE(semiorbit_cell(F, 0, 0, 10, 1, 4).below_resolution);
}

TEST(Converging, CatFiveIsNegligible) {
  auto F = zoo::make("cat", {{"q", 5}}, 64);
  auto r = converging_set(F, 10, TailWindow{8, 4});
  EXPECT_EQ(r.set.members(), std::vector<PointId>{0});
  EXPECT_LE(GridMeasure::uniform(25).mass(r.set), Mass(1, 25));
  EXPECT_TRUE(r.contained);
}

TEST(Nonwandering, CatAndRotationAreNonwandering) {
  auto C = zoo::make("cat", {{"q", 5}}, 64);
  EXPECT_TRUE(nonwandering_set(C, C.space()->distance_values(), 10).set.is_full());
  auto R = zoo::make("rotation", {{"q", 5}}, 64);
  EXPECT_TRUE(nonwandering_set(R, R.space()->distance_values(), 6).set.is_full());
}

TEST(Nonwandering, ShortHorizonsProduceCertificates) {
  auto R = zoo::make("rotation", {{"q", 8}}, 64);
  const std::vector<Length> radii{Length(1, 8)};
  auto shortrun = nonwandering_set(R, radii, 2);
  EXPECT_TRUE(shortrun.set.empty());
  ASSERT_EQ(shortrun.wandering.size(), 8u);
  EXPECT_EQ(shortrun.wandering[0].radius, Length(1, 8));
  EXPECT_TRUE(nonwandering_set(R, radii, 7).set.is_full());
  EXPECT_TRUE(nonwandering_set(R, radii, 6).horizon_sensitive);
}

TEST(Transitive, RotationAllCatNone) {
  auto R = zoo::make("rotation", {{"q", 5}}, 64);
  EXPECT_TRUE(transitive_points(R, TailWindow{10, 5}).is_full());
  auto C = zoo::make("cat", {{"q", 5}}, 64);
  EXPECT_TRUE(transitive_points(C, TailWindow{10, 5}).empty());
}
