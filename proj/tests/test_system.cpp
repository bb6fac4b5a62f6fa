#include <gtest/gtest.h>

#include "nadyn/nadyn.hpp"
#include "oracles.hpp"

using namespace nadyn;

namespace {

TimeVaryingSystem cat5() { return zoo::make("cat", {{"q", 5}}, 64); }

// Two non-commuting tables on circle(5): a rotation and a swap.
TimeVaryingSystem noncommuting() {
  auto X = FiniteMetricSpace::circle(5);
  auto r = zoo::circle_rotation(*X, 1);
  auto s = MapTable::from_forward({1, 0, 2, 3, 4});
  return TimeVaryingSystem(X, {s}, {r, s, r}, 64, "mixed");
}

}  // namespace

TEST(MapTable, RejectsCollisionsNamingThePair) {
  try {
    MapTable::from_forward({0, 0, 1});
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("0 and 1 both map to 0"), std::string::npos) << e.what();
  }
  EXPECT_THROW(MapTable::from_forward({0, 3, 1}), Error);
}

TEST(System, CatTableIsAPermutationMatchingTheFormula) {
  auto F = cat5();
  const auto& X = *F.space();
  for (int x = 0; x < 5; ++x)
    for (int y = 0; y < 5; ++y)
      EXPECT_EQ(F.map(1)(X.torus_point(x, y)), X.torus_point((2 * x + y) % 5, (x + y) % 5));
  EXPECT_THROW(TimeVaryingSystem(F.space(), {}, {}, 8), Error);
  EXPECT_TRUE(F.map(0).is_identity());
}

TEST(System, EvaluateAndWindowAgreeWithDirectComposition) {
  for (const auto& F : {cat5(), noncommuting(), zoo::make("cat_iso", {{"q", 5}, {"depth", 7}}, 64)}) {
    for (PointId x = 0; x < F.size(); ++x) {
      EXPECT_EQ(evaluate(F, 0, x), x);
      for (std::int64_t n = 1; n <= 8; ++n) {
        EXPECT_EQ(evaluate(F, n, x), oracle::window_forward(F, 1, n, x));
        EXPECT_EQ(window(F, 1, n, x, Direction::inv), evaluate(F, -n, x));
        for (std::int64_t i = 0; i <= n; ++i)
          EXPECT_EQ(evaluate(F, n, x), window(F, i + 1, n, evaluate(F, i, x), Direction::fwd));
      }
      EXPECT_EQ(window(F, 4, 3, x, Direction::fwd), x);
    }
  }
}

TEST(System, OrbitTableMatchesEvaluate) {
  auto F = noncommuting();
  OrbitTable orb(F, 9);
  for (std::int64_t n = -9; n <= 9; ++n)
    for (PointId x = 0; x < F.size(); ++x) EXPECT_EQ(orb.at(n, x), evaluate(F, n, x));
}

TEST(System, InverseSystemSwapsTimeDirection) {
  for (const auto& F : {cat5(), noncommuting()}) {
    auto G = invert(F);
    for (std::int64_t n = -8; n <= 8; ++n)
      for (PointId x = 0; x < F.size(); ++x) EXPECT_EQ(evaluate(G, n, x), evaluate(F, -n, x));
  }
}

TEST(System, PowerBlocksAreWindows) {
  for (const auto& F : {cat5(), noncommuting(), zoo::make("cat_iso", {{"q", 5}, {"depth", 10}}, 64)}) {
    for (std::int64_t k : {1, 2, 3}) {
      auto G = power(F, k);
      EXPECT_EQ(G.horizon_bound(), F.horizon_bound() / k);
      for (std::int64_t n = 0; n * k <= 12; ++n)
        for (PointId x = 0; x < F.size(); ++x) {
          EXPECT_EQ(evaluate(G, n, x), evaluate(F, n * k, x));
          if (n >= 1) EXPECT_EQ(G.map(n)(x), window(F, (n - 1) * k + 1, n * k, x, Direction::fwd));
        }
    }
  }
}

TEST(System, NegativeIndicesOfNonCommutingSchedulesAreNotInverses) {
  auto F = noncommuting();
  bool differs = false;
  for (PointId x = 0; x < F.size(); ++x) differs |= evaluate(F, -2, evaluate(F, 2, x)) != x;
  EXPECT_TRUE(differs);
  auto C = cat5();
  for (PointId x = 0; x < C.size(); ++x) EXPECT_EQ(evaluate(C, -5, evaluate(C, 5, x)), x);
}

TEST(System, HorizonBoundIsHard) {
  auto F = zoo::make("cat", {{"q", 5}}, 10);
  EXPECT_NO_THROW(evaluate(F, 10, 0));
  EXPECT_THROW(evaluate(F, 11, 0), Error);
  EXPECT_THROW(evaluate(F, -11, 0), Error);
  EXPECT_THROW(OrbitTable(F, 11), Error);
}

TEST(System, SystemDistance) {
  auto F = zoo::make("identity", {{"q", 3}}, 16);
  EXPECT_EQ(system_distance(F, invert(F)).p, Length(0));
  auto R = zoo::make("rotation", {{"q", 8}, {"step", 1}}, 16);
  auto I = zoo::make("identity", {{"q", 8}}, 16);
  const auto c = system_distance(R, I);
  EXPECT_EQ(c.eta_sup_forward, Length(1, 8));
  EXPECT_EQ(c.eta_sup_backward, Length(1, 8));
  EXPECT_EQ(c.p, Length(1, 8));
  EXPECT_THROW(system_distance(R, I, 0), Error);
}

TEST(System, ConjugateByTranslation) {
  auto F = cat5();
  auto h = zoo::translation(*F.space(), 1, 2);
  auto G = conjugate(F, h);
  for (std::int64_t n = -6; n <= 6; ++n)
    for (PointId x = 0; x < F.size(); ++x) EXPECT_EQ(evaluate(G, n, x), h.inverse_at(evaluate(F, n, h(x))));
}

TEST(System, RestrictToInvariantSet) {
  auto F = zoo::make("rotation", {{"q", 6}, {"step", 2}}, 16);
  auto evens = PointSet::of(6, std::vector<PointId>{0, 2, 4});
  auto r = restrict(F, evens);
  EXPECT_EQ(r.system.size(), 3u);
  for (PointId i = 0; i < 3; ++i) EXPECT_EQ(r.to_parent[r.system.map(1)(i)], F.map(1)(r.to_parent[i]));
  EXPECT_THROW(restrict(F, PointSet::of(6, std::vector<PointId>{0, 1})), Error);
}

TEST(System, EquicontinuityModulus) {
  auto R = zoo::make("rotation", {{"q", 8}}, 64);
  for (const auto& eps : R.space()->distance_values()) EXPECT_EQ(equicontinuity_modulus(R, eps, 8), eps);
  auto C = cat5();
  EXPECT_EQ(equicontinuity_modulus(C, Length(1, 5), 4), Length(1, 5));
  EXPECT_EQ(equicontinuity_modulus(C, Length(2, 5), 4), Length(1, 5));
  // Post-condition: d < delta implies every window image stays below eps.
  const auto& X = *C.space();
  const Length eps(2, 5);
  const auto delta = *equicontinuity_modulus(C, eps, 4);
  for (PointId x = 0; x < 25; ++x)
    for (PointId y = 0; y < 25; ++y) {
      if (!(X.distance(x, y) < delta)) continue;
      for (std::int64_t m = 0; m <= 4; ++m)
        for (std::int64_t n = m; n <= 4; ++n) {
          EXPECT_LT(X.distance(window(C, m, n, x, Direction::fwd), window(C, m, n, y, Direction::fwd)), eps);
          EXPECT_LT(X.distance(window(C, m, n, x, Direction::inv), window(C, m, n, y, Direction::inv)), eps);
        }
    }
}
