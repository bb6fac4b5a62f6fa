#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nadyn/measure.hpp"
#include "nadyn/parallel.hpp"
#include "nadyn/rng.hpp"
#include "nadyn/system.hpp"

namespace nadyn {

/// Finite stretch x_lo..x_hi of a sequence indexed by integers, lo <= 0 <= hi.
struct PseudoOrbit {
  std::int64_t lo = 0;
  std::vector<PointId> points;

  std::int64_t hi() const { return lo + static_cast<std::int64_t>(points.size()) - 1; }
  PointId at(std::int64_t n) const { return points.at(static_cast<std::size_t>(n - lo)); }
  PointId& at(std::int64_t n) { return points.at(static_cast<std::size_t>(n - lo)); }
  PointId base() const { return at(0); }

  /// Rejects index gaps and ranges that miss 0.
  static PseudoOrbit from_entries(const std::map<std::int64_t, PointId>& entries) {
    if (entries.empty()) throw Error("empty pseudo-orbit");
    PseudoOrbit p;
    p.lo = entries.begin()->first;
    std::int64_t expect = p.lo;
    for (const auto& [n, x] : entries) {
      if (n != expect) throw Error("pseudo-orbit has a gap at index " + std::to_string(expect));
      p.points.push_back(x);
      ++expect;
    }
    if (p.lo > 0 || p.hi() < 0) throw Error("pseudo-orbit index range must contain 0");
    return p;
  }

  friend bool operator==(const PseudoOrbit&, const PseudoOrbit&) = default;
};

inline PseudoOrbit true_orbit(const TimeVaryingSystem& F, PointId x, std::int64_t N) {
  PseudoOrbit p{-N, std::vector<PointId>(static_cast<std::size_t>(2 * N + 1))};
  const OrbitTable orb(F, N);
  for (std::int64_t n = -N; n <= N; ++n) p.at(n) = orb.at(n, x);
  return p;
}

struct PseudoOrbitCheck {
  bool ok = true;
  std::optional<std::int64_t> violation;  ///< first offending index n
  bool forward_clause = true;             ///< which clause failed
};

/// Forward clause d(f_{n+1}(x_n), x_{n+1}) < delta for 0 <= n < hi and backward
/// clause d(f_{-n}^{-1}(x_{n+1}), x_n) < delta for lo <= n <= -1.
inline PseudoOrbitCheck is_pseudo_orbit(const TimeVaryingSystem& F, const PseudoOrbit& seq, const Length& delta) {
  if (seq.points.empty() || seq.lo > 0 || seq.hi() < 0) throw Error("pseudo-orbit index range must contain 0");
  const auto& X = *F.space();
  for (auto p : seq.points) X.check(p);
  F.check_horizon(std::max(-seq.lo, seq.hi()));
  const auto k = X.open_units(delta);
  for (std::int64_t n = 0; n < seq.hi(); ++n)
    if (X.units(F.map(n + 1)(seq.at(n)), seq.at(n + 1)) > k) return {false, n, true};
  for (std::int64_t n = -1; n >= seq.lo; --n)
    if (X.units(F.map(-n).inverse_at(seq.at(n + 1)), seq.at(n)) > k) return {false, n, false};
  return {};
}

struct ShadowResult {
  std::optional<PointId> point;  ///< smallest-id eps-shadower, if any
  Length best_sup;               ///< sup distance of the best candidate
  PointId best_point = 0;
};

namespace detail {

/// sup_n d(F_n y, x_n) in units, abandoning once it exceeds cap.
inline std::int64_t tracking_gap(const OrbitTable& orb, const FiniteMetricSpace& X, const PseudoOrbit& seq, PointId y,
                                 std::int64_t cap) {
  std::int64_t best = X.units(y, seq.at(0));
  for (std::int64_t n = 1; best <= cap && (n <= seq.hi() || -n >= seq.lo); ++n) {
    if (n <= seq.hi()) best = std::max(best, X.units(orb.at(n, y), seq.at(n)));
    if (-n >= seq.lo) best = std::max(best, X.units(orb.at(-n, y), seq.at(-n)));
  }
  return best;
}

}  // namespace detail

inline ShadowResult shadowing_point(const OrbitTable& orb, const FiniteMetricSpace& X, const PseudoOrbit& seq,
                                    const Length& eps) {
  if (orb.horizon() < std::max(-seq.lo, seq.hi())) throw Error("orbit table shorter than the pseudo-orbit");
  const auto k = X.open_units(eps);
  for (PointId y = 0; y < X.size(); ++y) {
    const auto g = detail::tracking_gap(orb, X, seq, y, k);
    if (g <= k) return {y, X.from_units(g), y};
  }
  // No shadower: find the best sup by branch and bound.
  std::int64_t best = INT64_MAX;
  PointId arg = 0;
  for (PointId y = 0; y < X.size(); ++y) {
    const auto g = detail::tracking_gap(orb, X, seq, y, best - 1);
    if (g < best) {
      best = g;
      arg = y;
    }
  }
  return {std::nullopt, X.from_units(best), arg};
}

/// Exhaustive scan for y with sup_n d(F_n y, x_n) < eps, ties to the smallest id.
inline ShadowResult shadowing_point(const TimeVaryingSystem& F, const PseudoOrbit& seq, const Length& eps) {
  for (auto p : seq.points) F.space()->check(p);
  return shadowing_point(OrbitTable(F, std::max(-seq.lo, seq.hi())), *F.space(), seq, eps);
}

/// G = sigma_n o f_n per schedule entry, sigma_n a seeded product of disjoint
/// transpositions (a b) admitted only when d1(a, b) < delta and
/// d1(f_n^{-1} a, f_n^{-1} b) < delta. p(F, G) < delta is verified afterwards.
inline TimeVaryingSystem perturb_system(const TimeVaryingSystem& F, const Length& delta, std::uint64_t seed) {
  if (delta <= 0) throw Error("perturb_system requires delta > 0");
  const auto& X = *F.space();
  const auto n = F.size();
  const auto k = X.open_units(delta);
  auto perturb = [&](const MapTable& f, std::uint64_t index) {
    Rng rng(derive_seed(seed, index));
    std::vector<PointId> order(n);
    std::iota(order.begin(), order.end(), PointId{0});
    for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[uniform_index(rng, i)]);
    std::vector<PointId> sigma(n);
    std::iota(sigma.begin(), sigma.end(), PointId{0});
    std::vector<char> used(n, 0);
    for (auto a : order) {
      if (used[a]) continue;
      std::vector<PointId> partners;
      for (PointId b = 0; b < n; ++b)
        if (b != a && !used[b] && X.bounded_units(a, b) <= k && X.bounded_units(f.inverse_at(a), f.inverse_at(b)) <= k)
          partners.push_back(b);
      const auto pick = uniform_index(rng, partners.size() + 1);
      if (pick == partners.size()) continue;  // leave a fixed
      const auto b = partners[pick];
      used[a] = used[b] = 1;
      std::swap(sigma[a], sigma[b]);
    }
    std::vector<PointId> g(n);
    for (PointId x = 0; x < n; ++x) g[x] = sigma[f(x)];
    return MapTable::from_forward(std::move(g));
  };
  std::vector<MapTable> prefix, cycle;
  std::uint64_t index = 0;
  for (const auto& f : F.prefix()) prefix.push_back(perturb(f, index++));
  for (const auto& f : F.cycle()) cycle.push_back(perturb(f, index++));
  TimeVaryingSystem G(F.space(), std::move(prefix), std::move(cycle), F.horizon_bound(),
                      "perturb(" + F.name() + "," + std::to_string(seed) + ")");
  if (system_distance(F, G).p >= delta) throw Error("perturb_system: internal error, p(F,G) >= delta");
  return G;
}

/// Seed-matched perturbation trials: trial t uses derive_seed(seed, t).
struct PerturbationTrials {
  std::vector<TimeVaryingSystem> systems;
  std::vector<std::uint64_t> seeds;
};

inline PerturbationTrials perturbation_trials(const TimeVaryingSystem& F, const Length& delta, std::uint64_t trials,
                                              std::uint64_t seed) {
  PerturbationTrials out;
  for (std::uint64_t t = 0; t < trials; ++t) {
    out.seeds.push_back(derive_seed(seed, t));
    out.systems.push_back(perturb_system(F, delta, out.seeds.back()));
  }
  return out;
}

/// Full-measure set B: the carrier minus an exclusion of negligible mass.
inline PointSet full_measure_set(const GridMeasure& mu, const std::optional<PointSet>& exclusion) {
  PointSet B = PointSet::full(mu.size());
  if (!exclusion) return B;
  if (exclusion->universe() != mu.size()) throw Error("exclusion set lives on a different carrier");
  if (!mu.negligible(*exclusion))
    throw Error("excluded set has mass " + to_string(mu.mass(*exclusion)) + " above tau " + to_string(mu.tau()));
  return B - *exclusion;
}

/// Random delta-pseudo-orbit through x0: each entry drawn uniformly from the
/// open delta-ball around the image of its neighbour, in both directions.
inline PseudoOrbit random_pseudo_orbit(const TimeVaryingSystem& F, PointId x0, const Length& delta, std::int64_t N,
                                       Rng& rng) {
  const auto& X = *F.space();
  PseudoOrbit p{-N, std::vector<PointId>(static_cast<std::size_t>(2 * N + 1))};
  p.at(0) = x0;
  auto draw = [&](PointId centre) {
    const auto ball = X.ball(centre, delta, false).members();
    return ball[uniform_index(rng, ball.size())];
  };
  for (std::int64_t n = 0; n < N; ++n) p.at(n + 1) = draw(F.map(n + 1)(p.at(n)));
  for (std::int64_t n = -1; n >= -N; --n) p.at(n) = draw(F.map(-n).inverse_at(p.at(n + 1)));
  return p;
}

/// Drift delta-pseudo-orbit through x0: each entry is the point of the open
/// delta-ball around the image that lies farthest from the true orbit of x0
/// (smallest id on ties).
inline PseudoOrbit drift_pseudo_orbit(const TimeVaryingSystem& F, PointId x0, const Length& delta, std::int64_t N) {
  const auto& X = *F.space();
  const OrbitTable orb(F, N);
  PseudoOrbit p{-N, std::vector<PointId>(static_cast<std::size_t>(2 * N + 1))};
  p.at(0) = x0;
  auto pick = [&](PointId centre, PointId anchor) {
    PointId best = centre;
    std::int64_t far = -1;
    X.ball(centre, delta, false).for_each([&](PointId c) {
      if (X.units(c, anchor) > far) {
        far = X.units(c, anchor);
        best = c;
      }
    });
    return best;
  };
  for (std::int64_t n = 0; n < N; ++n) p.at(n + 1) = pick(F.map(n + 1)(p.at(n)), orb.at(n + 1, x0));
  for (std::int64_t n = -1; n >= -N; --n) p.at(n) = pick(F.map(-n).inverse_at(p.at(n + 1)), orb.at(n, x0));
  return p;
}

/// Orbit {G_n(x)}_{|n|<=N} as a sequence.
inline PseudoOrbit system_orbit(const OrbitTable& orbG, PointId x) {
  PseudoOrbit p{-orbG.horizon(), std::vector<PointId>(static_cast<std::size_t>(2 * orbG.horizon() + 1))};
  for (std::int64_t n = -orbG.horizon(); n <= orbG.horizon(); ++n) p.at(n) = orbG.at(n, x);
  return p;
}

struct TrackingFailure {
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  PointId x = 0;
  Length best_sup;
};

/// For each x in B, is there y with sup_{|n|<=N} d(F_n y, G_n x) < eps?
inline std::vector<TrackingFailure> tracking_failures(const OrbitTable& orbF, const TimeVaryingSystem& F,
                                                      const TimeVaryingSystem& G, const PointSet& B, const Length& eps,
                                                      std::size_t trial = 0, std::uint64_t seed = 0) {
  const OrbitTable orbG(G, orbF.horizon());
  const auto members = B.members();
  std::vector<std::optional<Length>> miss(members.size());
  parallel_for(members.size(), [&](std::size_t i) {
    const auto r = shadowing_point(orbF, *F.space(), system_orbit(orbG, members[i]), eps);
    if (!r.point) miss[i] = r.best_sup;
  });
  std::vector<TrackingFailure> out;
  for (std::size_t i = 0; i < members.size(); ++i)
    if (miss[i]) out.push_back({trial, seed, members[i], *miss[i]});
  return out;
}

struct PersistenceReport {
  bool verdict = false;
  Length eps;
  Length delta;
  std::int64_t horizon = 0;
  std::uint64_t seed = 0;
  std::vector<std::uint64_t> trial_seeds;
  PointSet B;
  std::vector<TrackingFailure> failures;
};

/// Persistence over explicit perturbation trials (each with p(F,G) < delta).
inline PersistenceReport persistence_with(const TimeVaryingSystem& F, const Length& eps, const Length& delta,
                                          const PointSet& B, const PerturbationTrials& trials, std::int64_t N) {
  if (eps <= 0) throw Error("persistence needs eps > 0");
  PersistenceReport rep;
  rep.eps = eps;
  rep.delta = delta;
  rep.horizon = N;
  rep.B = B;
  rep.trial_seeds = trials.seeds;
  const OrbitTable orbF(F, N);
  for (std::size_t t = 0; t < trials.systems.size(); ++t) {
    if (system_distance(F, trials.systems[t]).p >= delta)
      throw Error("persistence trial " + std::to_string(t) + " is not delta-close to F");
    auto f = tracking_failures(orbF, F, trials.systems[t], B, eps, t, trials.seeds[t]);
    rep.failures.insert(rep.failures.end(), f.begin(), f.end());
  }
  rep.verdict = rep.failures.empty();
  return rep;
}

inline PersistenceReport persistence_verdict(const TimeVaryingSystem& F, const GridMeasure& mu, const Length& eps,
                                             const Length& delta, std::uint64_t trials, std::uint64_t seed,
                                             std::int64_t N, std::optional<Mass> tau = std::nullopt,
                                             const std::optional<PointSet>& exclusion = std::nullopt) {
  if (trials < 1) throw Error("persistence_verdict needs trials >= 1");
  const auto m = tau ? mu.with_tau(*tau) : mu;
  const auto B = full_measure_set(m, exclusion);
  auto rep = persistence_with(F, eps, delta, B, perturbation_trials(F, delta, trials, seed), N);
  rep.seed = seed;
  return rep;
}

struct ShadowingInputs {
  PerturbationTrials trials;           ///< orbits of these systems through B are tested
  std::vector<PseudoOrbit> pseudo;     ///< random and drift pseudo-orbits through B
  std::vector<std::string> pseudo_kind;
};

struct ShadowingFailure {
  std::string source;  ///< "system", "random" or "drift"
  std::size_t index = 0;  ///< trial or pseudo-orbit index
  PseudoOrbit pseudo;
  Length best_sup;
};

struct ShadowingReport {
  bool verdict = false;
  Length eps;
  Length delta;
  std::int64_t horizon = 0;
  std::uint64_t seed = 0;
  PointSet B;
  std::size_t tested = 0;  ///< pseudo-orbits checked
  std::vector<ShadowingFailure> failures;
};

inline ShadowingInputs shadowing_inputs(const TimeVaryingSystem& F, const Length& delta, const PointSet& B,
                                        std::uint64_t trials, std::uint64_t seed, std::int64_t N) {
  if (B.empty()) throw Error("shadowing needs a nonempty set B");
  ShadowingInputs in{perturbation_trials(F, delta, trials, seed), {}, {}};
  const auto members = B.members();
  Rng rng(derive_seed(seed, 0x5eed5eedULL));
  for (std::uint64_t t = 0; t < trials; ++t) {
    const auto x0 = members[uniform_index(rng, members.size())];
    in.pseudo.push_back(random_pseudo_orbit(F, x0, delta, N, rng));
    in.pseudo_kind.emplace_back("random");
  }
  for (auto x0 : members) {
    in.pseudo.push_back(drift_pseudo_orbit(F, x0, delta, N));
    in.pseudo_kind.emplace_back("drift");
  }
  return in;
}

/// Every tested delta-pseudo-orbit through B must admit an eps-shadower. The
/// verdict means "no counterexample found", never a proof.
inline ShadowingReport shadowing_with(const TimeVaryingSystem& F, const Length& eps, const Length& delta, const PointSet& B,
                                      const ShadowingInputs& in, std::int64_t N) {
  if (eps <= 0) throw Error("shadowing needs eps > 0");
  if (delta <= 0 || delta > 1) throw Error("shadowing needs 0 < delta <= 1");
  ShadowingReport rep;
  rep.eps = eps;
  rep.delta = delta;
  rep.horizon = N;
  rep.B = B;
  const OrbitTable orbF(F, N);
  const auto& X = *F.space();
  for (std::size_t t = 0; t < in.trials.systems.size(); ++t) {
    const auto& G = in.trials.systems[t];
    const OrbitTable orbG(G, N);
    for (auto x : B.members()) {
      auto seq = system_orbit(orbG, x);
      if (!is_pseudo_orbit(F, seq, delta).ok) throw Error("perturbed orbit is not a delta-pseudo-orbit");
      ++rep.tested;
      const auto r = shadowing_point(orbF, X, seq, eps);
      if (!r.point) rep.failures.push_back({"system", t, std::move(seq), r.best_sup});
    }
  }
  for (std::size_t i = 0; i < in.pseudo.size(); ++i) {
    const auto& seq = in.pseudo[i];
    if (!B.contains(seq.base())) throw Error("pseudo-orbit does not pass through B");
    if (!is_pseudo_orbit(F, seq, delta).ok) throw Error("generated sequence is not a delta-pseudo-orbit");
    ++rep.tested;
    const auto r = shadowing_point(orbF, X, seq, eps);
    if (!r.point) rep.failures.push_back({in.pseudo_kind[i], i, seq, r.best_sup});
  }
  rep.verdict = rep.failures.empty();
  return rep;
}

inline ShadowingReport shadowing_verdict(const TimeVaryingSystem& F, const GridMeasure& mu, const Length& eps,
                                         const Length& delta, const std::optional<PointSet>& exclusion,
                                         std::uint64_t trials, std::uint64_t seed, std::int64_t N) {
  if (trials < 1) throw Error("shadowing_verdict needs trials >= 1");
  const auto B = full_measure_set(mu, exclusion);
  auto rep = shadowing_with(F, eps, delta, B, shadowing_inputs(F, delta, B, trials, seed, N), N);
  rep.seed = seed;
  return rep;
}

}  // namespace nadyn
