#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nadyn/measure.hpp"
#include "nadyn/parallel.hpp"
#include "nadyn/rng.hpp"
#include "nadyn/system.hpp"

namespace nadyn {

namespace detail {

/// max_{|n|<=N} d(F_n x, F_n y) in units, abandoning once it exceeds cap.
inline std::int64_t orbit_gap_units(const OrbitTable& orb, const FiniteMetricSpace& X, PointId x, PointId y,
                                    std::int64_t cap) {
  std::int64_t best = X.units(x, y);
  if (best > cap) return best;
  for (std::int64_t n = 1; n <= orb.horizon(); ++n) {
    best = std::max({best, X.units(orb.at(n, x), orb.at(n, y)), X.units(orb.at(-n, x), orb.at(-n, y))});
    if (best > cap) return best;
  }
  return best;
}

}  // namespace detail

/// Gamma_delta(x) truncated to |n| <= N: points whose orbit stays delta-close to x's.
inline PointSet dynamical_ball(const OrbitTable& orb, const FiniteMetricSpace& X, PointId x, const Length& delta) {
  const auto k = X.closed_units(delta);
  PointSet s(X.size());
  for (PointId y = 0; y < X.size(); ++y)
    if (detail::orbit_gap_units(orb, X, x, y, k) <= k) s.insert(y);
  return s;
}

inline PointSet dynamical_ball(const TimeVaryingSystem& F, PointId x, const Length& delta, std::int64_t N) {
  if (delta < 0) throw Error("negative delta");
  F.space()->check(x);
  return dynamical_ball(OrbitTable(F, N), *F.space(), x, delta);
}

struct DeltaScan {
  Length delta;
  Mass max_mass;
  PointId witness = 0;     ///< point attaining max_mass (smallest id)
  PointSet witness_ball;   ///< Gamma_delta(witness)
  bool open_ball_inside = false;  ///< B(witness, delta) is contained in the dynamical ball
};

struct ExpansivenessReport {
  bool verdict = false;
  std::optional<Length> constant;
  std::int64_t horizon = 0;
  Mass tau;
  bool nonatomic = false;  ///< max atom <= tau, reported separately from the verdict
  Mass max_atom;
  std::vector<DeltaScan> scans;
};

/// Largest delta in the grid whose dynamical balls are all negligible.
inline ExpansivenessReport expansive_verdict(const TimeVaryingSystem& F, const GridMeasure& mu,
                                             const std::vector<Length>& delta_grid, std::int64_t N,
                                             std::optional<Mass> tau = std::nullopt) {
  if (delta_grid.empty()) throw Error("expansive_verdict: empty delta grid");
  if (!std::is_sorted(delta_grid.begin(), delta_grid.end())) throw Error("expansive_verdict: delta grid not ascending");
  if (mu.size() != F.size()) throw Error("expansive_verdict: measure and system carriers differ");
  const auto& X = *F.space();
  const OrbitTable orb(F, N);
  const Mass threshold = tau.value_or(mu.tau());
  const auto cap = X.closed_units(delta_grid.back());
  const auto n = F.size();

  // gap[x][y] = orbit gap, saturated above the largest delta of interest.
  std::vector<std::int64_t> gap(n * n);
  parallel_for(n, [&](std::size_t x) {
    for (PointId y = 0; y < n; ++y) gap[x * n + y] = detail::orbit_gap_units(orb, X, static_cast<PointId>(x), y, cap);
  });

  ExpansivenessReport rep;
  rep.horizon = N;
  rep.tau = threshold;
  rep.max_atom = mu.max_atom();
  rep.nonatomic = mu.nonatomic(threshold);
  const auto& w = mu.numerators();
  for (const auto& delta : delta_grid) {
    const auto k = X.closed_units(delta);
    std::int64_t best = -1;
    PointId arg = 0;
    for (PointId x = 0; x < n; ++x) {
      std::int64_t s = 0;
      for (PointId y = 0; y < n; ++y)
        if (gap[x * n + y] <= k) s += w[y];
      if (s > best) {
        best = s;
        arg = x;
      }
    }
    DeltaScan scan{delta, Mass(best, mu.denominator()), arg, PointSet(n), false};
    for (PointId y = 0; y < n; ++y)
      if (gap[arg * n + y] <= k) scan.witness_ball.insert(y);
    scan.open_ball_inside = X.ball(arg, delta, false).is_subset_of(scan.witness_ball);
    if (scan.max_mass <= threshold) {
      rep.verdict = true;
      rep.constant = delta;
    }
    rep.scans.push_back(std::move(scan));
  }
  return rep;
}

/// Finite open cover. On a finite carrier every set is closed, so cl(A) = A.
struct OpenCover {
  std::vector<PointSet> sets;
  std::optional<Length> lebesgue;  ///< nullopt when unbounded (a member is the whole carrier)
};

/// Largest L (over the carrier's distances) such that every open L-ball lies
/// in one member: L = min_x max_{A containing x} d(x, X \ A).
inline std::optional<Length> lebesgue_number(const FiniteMetricSpace& X, const std::vector<PointSet>& sets) {
  std::optional<std::int64_t> L;
  for (PointId x = 0; x < X.size(); ++x) {
    std::optional<std::int64_t> lam = 0;
    bool covered = false;
    for (const auto& A : sets) {
      if (!A.contains(x)) continue;
      covered = true;
      std::optional<std::int64_t> reach;
      for (PointId z = 0; z < X.size(); ++z)
        if (!A.contains(z)) reach = reach ? std::min(*reach, X.units(x, z)) : X.units(x, z);
      if (!reach) {
        lam.reset();
        break;
      }
      lam = std::max(*lam, *reach);
    }
    if (!covered) throw Error("sets do not cover point " + std::to_string(x));
    if (lam) L = L ? std::min(*L, *lam) : *lam;
  }
  if (!L) return std::nullopt;
  return X.from_units(*L);
}

inline OpenCover make_cover(const FiniteMetricSpace& X, std::vector<PointSet> sets) {
  if (sets.empty()) throw Error("empty cover");
  PointSet u(X.size());
  for (const auto& s : sets) u |= s;
  if (!u.is_full()) throw Error("sets do not cover point " + std::to_string(u.complement().first()));
  auto L = lebesgue_number(X, sets);
  return OpenCover{std::move(sets), L};
}

/// Cover by the open e-balls centred at every point.
inline OpenCover generator_from_constant(const FiniteMetricSpace& X, const Length& e) {
  if (e <= 0) throw Error("generator_from_constant requires e > 0");
  std::vector<PointSet> sets;
  for (PointId x = 0; x < X.size(); ++x) sets.push_back(X.ball(x, e, false));
  return make_cover(X, std::move(sets));
}

enum class GeneratorMode { exhaustive, sampled };

struct GeneratorReport {
  bool verdict = false;
  GeneratorMode mode = GeneratorMode::exhaustive;
  std::int64_t horizon = 0;
  Mass tau;
  std::uint64_t nodes = 0;  ///< search nodes (exhaustive) or sequences (sampled) examined
  /// Failing sequence: cover index per n = -N..N, and its intersection.
  std::vector<std::size_t> witness_sequence;
  std::optional<PointSet> witness_set;
  Mass witness_mass;
};

struct GeneratorOptions {
  GeneratorMode mode = GeneratorMode::exhaustive;
  std::uint64_t budget = 5'000'000;  ///< node budget for exhaustive mode
  std::uint64_t trials = 1000;       ///< sequences for sampled mode
  std::uint64_t seed = 0;
};

/// Checks mass(cap_{|n|<=N} F_n(A_n)) <= tau for every sequence from the cover.
/// Exhaustive mode searches depth-first in the order n = 0, 1, -1, 2, -2, ...;
/// a branch is closed once its partial intersection is negligible, and among
/// sibling branches only inclusion-maximal intersections are expanded (a
/// failing completion of a smaller branch also fails for the larger one).
inline GeneratorReport is_mu_generator(const TimeVaryingSystem& F, const GridMeasure& mu, const OpenCover& cover,
                                       std::int64_t N, std::optional<Mass> tau = std::nullopt,
                                       const GeneratorOptions& opt = {}) {
  if (cover.sets.empty()) throw Error("is_mu_generator: empty cover");
  if (mu.size() != F.size()) throw Error("is_mu_generator: measure and system carriers differ");
  const OrbitTable orb(F, N);
  const auto n = F.size();
  const Mass threshold = tau.value_or(mu.tau());
  const auto m = cover.sets.size();

  // images[idx(t)][a] = F_t(A_a)
  std::vector<std::int64_t> order{0};
  for (std::int64_t t = 1; t <= N; ++t) {
    order.push_back(t);
    order.push_back(-t);
  }
  auto slot = [&](std::int64_t t) { return static_cast<std::size_t>(t + N); };
  std::vector<std::vector<PointSet>> images(2 * N + 1);
  for (auto t : order) {
    for (const auto& A : cover.sets) {
      PointSet img(n);
      A.for_each([&](PointId p) { img.insert(orb.at(t, p)); });
      images[slot(t)].push_back(std::move(img));
    }
  }

  GeneratorReport rep;
  rep.mode = opt.mode;
  rep.horizon = N;
  rep.tau = threshold;

  auto record_failure = [&](const std::vector<std::size_t>& choice_by_order, const PointSet& set) {
    rep.witness_sequence.assign(2 * N + 1, 0);
    for (std::size_t d = 0; d < order.size(); ++d) rep.witness_sequence[slot(order[d])] = choice_by_order[d];
    rep.witness_set = set;
    rep.witness_mass = mu.mass(set);
  };

  if (opt.mode == GeneratorMode::sampled) {
    Rng rng(opt.seed);
    std::vector<std::size_t> choice(order.size());
    for (std::uint64_t trial = 0; trial < opt.trials; ++trial) {
      PointSet acc = PointSet::full(n);
      for (std::size_t d = 0; d < order.size(); ++d) {
        choice[d] = uniform_index(rng, m);
        acc &= images[slot(order[d])][choice[d]];
      }
      ++rep.nodes;
      if (!mu.negligible(acc)) {
        record_failure(choice, acc);
        return rep;
      }
    }
    rep.verdict = true;
    return rep;
  }

  std::vector<std::size_t> choice(order.size());
  bool failed = false;
  auto dfs = [&](auto&& self, std::size_t depth, const PointSet& acc) -> void {
    if (failed) return;
    if (++rep.nodes > opt.budget)
      throw Error("is_mu_generator: exhaustive search exceeded budget of " + std::to_string(opt.budget) +
                  " nodes; use sampled mode");
    if (mu.negligible(acc)) return;
    if (depth == order.size()) {
      failed = true;
      record_failure(choice, acc);
      return;
    }
    const auto& layer = images[slot(order[depth])];
    std::vector<std::pair<std::size_t, PointSet>> kids;
    for (std::size_t a = 0; a < m; ++a) {
      PointSet next = acc & layer[a];
      if (mu.negligible(next)) continue;
      bool dominated = false;
      for (auto& [b, other] : kids) {
        if (next.is_subset_of(other)) {
          dominated = true;
          break;
        }
      }
      if (dominated) continue;
      std::erase_if(kids, [&](const auto& kid) { return kid.second.is_subset_of(next); });
      kids.emplace_back(a, std::move(next));
    }
    std::sort(kids.begin(), kids.end(), [](const auto& l, const auto& r) { return l.first < r.first; });
    for (const auto& [a, next] : kids) {
      choice[depth] = a;
      self(self, depth + 1, next);
      if (failed) return;
    }
  };
  dfs(dfs, 0, PointSet::full(n));
  rep.verdict = !failed;
  return rep;
}

}  // namespace nadyn
