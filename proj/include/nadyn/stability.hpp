#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nadyn/expansive.hpp"
#include "nadyn/measure.hpp"
#include "nadyn/parallel.hpp"
#include "nadyn/shadowing.hpp"
#include "nadyn/system.hpp"

namespace nadyn {

/// H(x) = {y : d(F_n y, G_n x) <= eps' for all |n| <= N}.
struct SetValuedMap {
  std::vector<PointSet> assign;
  Length eps_prime;
  std::int64_t horizon = 0;

  PointSet domain() const {
    PointSet d(assign.size());
    for (PointId x = 0; x < assign.size(); ++x)
      if (!assign[x].empty()) d.insert(x);
    return d;
  }
  std::size_t max_size() const {
    std::size_t m = 0;
    for (const auto& s : assign) m = std::max(m, s.size());
    return m;
  }
};

namespace detail {
inline void check_same_carrier(const TimeVaryingSystem& F, const TimeVaryingSystem& G) {
  if (F.size() != G.size() || !F.space()->same_metric_as(*G.space()))
    throw Error("systems live on different carriers");
}
}  // namespace detail

inline SetValuedMap stability_map(const TimeVaryingSystem& F, const TimeVaryingSystem& G, const Length& eps_prime,
                                  std::int64_t N) {
  detail::check_same_carrier(F, G);
  if (eps_prime <= 0) throw Error("stability_map needs eps_prime > 0");
  const auto& X = *F.space();
  const OrbitTable orbF(F, N), orbG(G, N);
  const auto k = X.closed_units(eps_prime);
  const auto size = F.size();
  SetValuedMap H{std::vector<PointSet>(size, PointSet(size)), eps_prime, N};
  parallel_for(size, [&](std::size_t xi) {
    const auto x = static_cast<PointId>(xi);
    for (PointId y = 0; y < size; ++y) {
      bool ok = X.units(y, x) <= k;
      for (std::int64_t n = 1; n <= N && ok; ++n)
        ok = X.units(orbF.at(n, y), orbG.at(n, x)) <= k && X.units(orbF.at(-n, y), orbG.at(-n, x)) <= k;
      if (ok) H.assign[x].insert(y);
    }
  });
  return H;
}

/// [H_0(x), ..., H_m_max(x)], each H_m constrained by |n| <= m only.
inline std::vector<PointSet> refinement_sequence(const TimeVaryingSystem& F, const TimeVaryingSystem& G,
                                                 const Length& eps_prime, PointId x, std::int64_t m_max) {
  detail::check_same_carrier(F, G);
  if (m_max < 0) throw Error("refinement_sequence needs m_max >= 0");
  const auto& X = *F.space();
  X.check(x);
  const OrbitTable orbF(F, m_max), orbG(G, m_max);
  const auto k = X.closed_units(eps_prime);
  std::vector<PointSet> chain;
  PointSet cur = X.ball(orbG.at(0, x), eps_prime, true);
  chain.push_back(cur);
  for (std::int64_t m = 1; m <= m_max; ++m) {
    PointSet next(X.size());
    cur.for_each([&](PointId y) {
      if (X.units(orbF.at(m, y), orbG.at(m, x)) <= k && X.units(orbF.at(-m, y), orbG.at(-m, x)) <= k) next.insert(y);
    });
    cur = next;
    chain.push_back(cur);
  }
  return chain;
}

struct StabilityReport {
  bool verdict = false;
  Length eps;
  Length eps_prime;
  std::int64_t horizon = 0;
  Mass tau;
  /// (i) mass(X \ Dom H) <= tau, (ii) max_x mass(H(x)) <= tau,
  /// (iii) H(x) inside the open eps-ball, (iv) F_n(H(x)) inside B[G_n(x), eps].
  bool domain_full = false;
  bool values_null = false;
  bool near_identity = false;
  bool orbit_contained = false;
  Mass outside_domain_mass;
  Mass max_value_mass;
  std::optional<PointId> worst_value_point;
  std::optional<PointId> near_identity_witness;
  std::optional<std::pair<PointId, std::int64_t>> orbit_witness;  ///< (x, n)
  SetValuedMap H;
};

/// Conditions (i)-(iv) for one perturbed system G. Upper semi-continuity and
/// measurability of Dom(H) hold on any finite carrier and are not checked.
inline StabilityReport stability_check(const TimeVaryingSystem& F, const GridMeasure& mu, const TimeVaryingSystem& G,
                                       const Length& eps, const Length& eps_prime, std::int64_t N,
                                       std::optional<Mass> tau = std::nullopt) {
  if (eps_prime > eps) throw Error("stability_check needs eps_prime <= eps");
  if (mu.size() != F.size()) throw Error("stability_check: measure and system carriers differ");
  const auto& X = *F.space();
  StabilityReport rep;
  rep.eps = eps;
  rep.eps_prime = eps_prime;
  rep.horizon = N;
  rep.tau = tau.value_or(mu.tau());
  rep.H = stability_map(F, G, eps_prime, N);

  const auto dom = rep.H.domain();
  rep.outside_domain_mass = mu.mass(dom.complement());
  rep.domain_full = rep.outside_domain_mass <= rep.tau;

  rep.max_value_mass = Mass(0);
  for (PointId x = 0; x < X.size(); ++x) {
    const auto m = mu.mass(rep.H.assign[x]);
    if (!rep.worst_value_point || m > rep.max_value_mass) {
      rep.max_value_mass = m;
      rep.worst_value_point = x;
    }
  }
  rep.values_null = rep.max_value_mass <= rep.tau;

  const auto open_eps = X.open_units(eps);
  const auto closed_eps = X.closed_units(eps);
  rep.near_identity = true;
  for (PointId x = 0; x < X.size() && rep.near_identity; ++x)
    rep.H.assign[x].for_each([&](PointId y) {
      if (rep.near_identity && X.units(x, y) > open_eps) {
        rep.near_identity = false;
        rep.near_identity_witness = x;
      }
    });

  const OrbitTable orbF(F, N), orbG(G, N);
  rep.orbit_contained = true;
  for (PointId x = 0; x < X.size() && rep.orbit_contained; ++x) {
    rep.H.assign[x].for_each([&](PointId y) {
      for (std::int64_t n = -N; n <= N && rep.orbit_contained; ++n) {
        if (X.units(orbF.at(n, y), orbG.at(n, x)) > closed_eps) {
          rep.orbit_contained = false;
          rep.orbit_witness = std::make_pair(x, n);
        }
      }
    });
  }
  rep.verdict = rep.domain_full && rep.values_null && rep.near_identity && rep.orbit_contained;
  return rep;
}

/// Largest value strictly below bound that changes no closed ball: the midpoint
/// between bound and the largest carrier distance (or 0) strictly below it.
inline Length radius_strictly_below(const FiniteMetricSpace& X, const Length& bound) {
  if (bound <= 0) throw Error("radius_strictly_below needs a positive bound");
  const auto below = X.open_units(bound);  // largest unit count strictly below bound
  const Length floor_value = X.from_units(std::max<std::int64_t>(below, 0));
  return (floor_value + bound) / Length(2);
}

struct WaltersReport {
  enum class Outcome { yes, no, not_applicable };
  Outcome outcome = Outcome::not_applicable;
  std::string reason;
  Length eps;
  std::int64_t horizon = 0;
  Mass tau;
  std::uint64_t seed = 0;
  std::optional<ExpansivenessReport> expansive;
  std::optional<Length> e;
  std::optional<Length> eps_prime;
  std::optional<Length> delta;
  std::vector<PersistenceReport> persistence_scan;  ///< one per delta tried, descending
  std::vector<std::uint64_t> trial_seeds;
  std::vector<StabilityReport> stability;
  std::size_t max_H_size = 0;
};

/// expansive constant e, eps' < min(e/2, eps), largest persistent delta from the
/// grid, then seeded stability checks against perturbations within delta.
inline WaltersReport walters_pipeline(const TimeVaryingSystem& F, const GridMeasure& mu, const Length& eps,
                                      std::vector<Length> delta_grid, std::uint64_t trials, std::uint64_t seed,
                                      std::int64_t N, std::optional<Mass> tau = std::nullopt) {
  if (delta_grid.empty()) throw Error("walters_pipeline needs a nonempty delta grid");
  if (trials < 1) throw Error("walters_pipeline needs trials >= 1");
  const auto& X = *F.space();
  WaltersReport rep;
  rep.eps = eps;
  rep.horizon = N;
  rep.seed = seed;
  rep.tau = tau.value_or(mu.tau());
  const auto m = mu.with_tau(rep.tau);
  if (!m.nonatomic(rep.tau)) {
    rep.reason = "measure has an atom of mass " + to_string(m.max_atom()) + " above tau " + to_string(rep.tau);
    return rep;
  }
  std::sort(delta_grid.begin(), delta_grid.end());
  rep.expansive = expansive_verdict(F, m, X.distance_values(), N);
  if (!rep.expansive->verdict) {
    rep.reason = "no expansive constant in the carrier's distance grid";
    return rep;
  }
  rep.e = rep.expansive->constant;
  rep.eps_prime = radius_strictly_below(X, std::min(*rep.e / Length(2), eps));

  const auto B = PointSet::full(X.size());
  for (auto it = delta_grid.rbegin(); it != delta_grid.rend(); ++it) {
    auto p = persistence_with(F, *rep.eps_prime, *it, B, perturbation_trials(F, *it, trials, seed), N);
    p.seed = seed;
    const bool ok = p.verdict;
    rep.persistence_scan.push_back(std::move(p));
    if (ok) {
      rep.delta = *it;
      break;
    }
  }
  if (!rep.delta) {
    rep.outcome = WaltersReport::Outcome::no;
    rep.reason = "no delta in the grid passed persistence at eps'";
    return rep;
  }
  const auto trial_set = perturbation_trials(F, *rep.delta, trials, seed);
  rep.trial_seeds = trial_set.seeds;
  bool all = true;
  for (const auto& G : trial_set.systems) {
    auto s = stability_check(F, m, G, eps, *rep.eps_prime, N);
    all = all && s.verdict;
    rep.max_H_size = std::max(rep.max_H_size, s.H.max_size());
    rep.stability.push_back(std::move(s));
  }
  rep.outcome = all ? WaltersReport::Outcome::yes : WaltersReport::Outcome::no;
  if (!all) rep.reason = "a stability check failed";
  return rep;
}

}  // namespace nadyn
