#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <vector>

#include "nadyn/measure.hpp"
#include "nadyn/parallel.hpp"
#include "nadyn/system.hpp"

namespace nadyn {

/// Finite proxy for a limit: indices tail_start <= |n| <= horizon form the tail.
struct TailWindow {
  std::int64_t horizon = 0;
  std::int64_t tail_start = 0;

  void validate() const {
    if (tail_start < 0 || tail_start > horizon)
      throw Error("tail window needs 0 <= tail_start <= horizon, got tail_start=" + std::to_string(tail_start) +
                  " horizon=" + std::to_string(horizon));
  }
};

enum class LimitKind { omega, alpha };

struct LimitSet {
  PointSet set;
  /// Tail visit-set unchanged when the window is extended by one and by two indices.
  bool stabilized = false;
};

namespace detail {
inline PointSet tail_visits(const TimeVaryingSystem& F, PointId x, LimitKind kind, std::int64_t from, std::int64_t to) {
  PointSet s(F.size());
  PointId y = evaluate(F, kind == LimitKind::omega ? from : -from, x);
  s.insert(y);
  for (std::int64_t n = from + 1; n <= to; ++n) {
    y = kind == LimitKind::omega ? F.map(n)(y) : F.map(n).inverse_at(y);
    s.insert(y);
  }
  return s;
}
}  // namespace detail

/// omega (alpha) limit set as the visit-set of F_n(x) (F_{-n}(x)) over the tail.
inline LimitSet limit_set(const TimeVaryingSystem& F, PointId x, LimitKind kind, const TailWindow& w) {
  w.validate();
  F.space()->check(x);
  LimitSet out{detail::tail_visits(F, x, kind, w.tail_start, w.horizon), false};
  if (w.horizon + 2 <= F.horizon_bound()) {
    const auto ext1 = detail::tail_visits(F, x, kind, w.tail_start, w.horizon + 1);
    const auto ext2 = detail::tail_visits(F, x, kind, w.tail_start, w.horizon + 2);
    out.stabilized = ext1 == out.set && ext2 == out.set;
  }
  return out;
}

struct SemiorbitCell {
  PointSet cell;
  bool below_resolution = false;  ///< 1/n is smaller than the carrier's smallest positive distance
};

/// {z : max(d(F_{-i} z, x), d(F_i z, y)) <= 1/n for all m <= i <= N}.
inline SemiorbitCell semiorbit_cell(const TimeVaryingSystem& F, PointId x, PointId y, std::int64_t n, std::int64_t m,
                                    std::int64_t N) {
  if (n < 1 || m < 1) throw Error("semiorbit_cell needs positive n and m");
  if (m > N) throw Error("semiorbit_cell needs m <= N");
  const auto& X = *F.space();
  X.check(x);
  X.check(y);
  const OrbitTable orb(F, N);
  const auto k = X.closed_units(Length(1, n));
  SemiorbitCell out{PointSet(X.size()), k < X.resolution_units()};
  for (PointId z = 0; z < X.size(); ++z) {
    bool ok = true;
    for (std::int64_t i = m; i <= N && ok; ++i) ok = X.units(orb.at(-i, z), x) <= k && X.units(orb.at(i, z), y) <= k;
    if (ok) out.cell.insert(z);
  }
  return out;
}

struct ConvergingSetReport {
  PointSet set;        ///< points with singleton alpha and omega tails
  PointSet cell_union;  ///< union of semiorbit cells over all carrier pairs
  bool contained = false;
  bool stabilized = true;  ///< every limit set used was stabilized
  std::int64_t resolution_n = 0;
};

/// A(F) on the tail window, with the over-approximation by semiorbit cells.
/// The union over pairs (x, y) factors: z is covered iff some x is within 1/n
/// of its whole backward tail and some y within 1/n of its whole forward tail.
inline ConvergingSetReport converging_set(const TimeVaryingSystem& F, std::int64_t resolution_n, const TailWindow& w) {
  w.validate();
  if (resolution_n < 1) throw Error("converging_set needs resolution_n >= 1");
  const auto& X = *F.space();
  const auto size = X.size();
  const auto m = std::max<std::int64_t>(w.tail_start, 1);
  const OrbitTable orb(F, w.horizon);
  const auto k = X.closed_units(Length(1, resolution_n));

  ConvergingSetReport rep{PointSet(size), PointSet(size), false, true, resolution_n};
  std::vector<char> in_set(size), in_union(size), stable(size, 1);
  parallel_for(size, [&](std::size_t zi) {
    const auto z = static_cast<PointId>(zi);
    const auto om = limit_set(F, z, LimitKind::omega, w);
    const auto al = limit_set(F, z, LimitKind::alpha, w);
    in_set[z] = om.set.size() == 1 && al.set.size() == 1;
    stable[z] = om.stabilized && al.stabilized;
    auto has_center = [&](int sign) {
      if (m > w.horizon) return true;  // empty tail constraint
      for (PointId c = 0; c < size; ++c) {
        bool ok = true;
        for (std::int64_t i = m; i <= w.horizon && ok; ++i) ok = X.units(orb.at(sign * i, z), c) <= k;
        if (ok) return true;
      }
      return false;
    };
    in_union[z] = has_center(-1) && has_center(+1);
  });
  for (PointId z = 0; z < size; ++z) {
    if (in_set[z]) rep.set.insert(z);
    if (in_union[z]) rep.cell_union.insert(z);
    if (!stable[z]) rep.stabilized = false;
  }
  rep.contained = rep.set.is_subset_of(rep.cell_union);
  return rep;
}

/// {p : F_{ik+j}(p) = F_j(p) for all |i| <= horizon/k, 0 <= j < k}.
inline PointSet periodic_points(const TimeVaryingSystem& F, std::int64_t k, std::int64_t horizon) {
  if (k < 1) throw Error("periodic_points needs k >= 1");
  if (k > horizon) throw Error("periodic_points needs k <= horizon");
  const auto imax = horizon / k;
  const OrbitTable orb(F, imax * k + k - 1);
  PointSet s(F.size());
  for (PointId p = 0; p < F.size(); ++p) {
    bool ok = true;
    for (std::int64_t i = -imax; i <= imax && ok; ++i)
      for (std::int64_t j = 0; j < k && ok; ++j) ok = orb.at(i * k + j, p) == orb.at(j, p);
    if (ok) s.insert(p);
  }
  return s;
}

struct AperiodicityReport {
  bool verdict = false;
  std::int64_t horizon = 0;
  Mass tau;
  std::vector<PointSet> periodic;  ///< Per_k for k = 1..k_max
  std::vector<Mass> masses;
};

inline AperiodicityReport aperiodicity_verdict(const TimeVaryingSystem& F, const GridMeasure& mu, std::int64_t k_max,
                                               std::int64_t horizon, std::optional<Mass> tau = std::nullopt) {
  if (k_max < 1 || k_max > horizon) throw Error("aperiodicity_verdict needs 1 <= k_max <= horizon");
  AperiodicityReport rep;
  rep.horizon = horizon;
  rep.tau = tau.value_or(mu.tau());
  rep.verdict = true;
  for (std::int64_t k = 1; k <= k_max; ++k) {
    auto per = periodic_points(F, k, horizon);
    auto m = mu.mass(per);
    if (m > rep.tau) rep.verdict = false;
    rep.periodic.push_back(std::move(per));
    rep.masses.push_back(m);
  }
  return rep;
}

struct NonwanderingReport {
  PointSet set;
  /// For each wandering point: the radius and start index n for which no window returns.
  struct Certificate {
    PointId point;
    Length radius;
    std::int64_t start;
  };
  std::vector<Certificate> wandering;
  bool horizon_sensitive = false;  ///< result differs at horizon + 1
};

namespace detail {

/// Window returns F_[m,m+r](U) or F^{-1}_[m,m+r](U) meeting U for m in
/// [n, horizon] and window length r in [0, horizon].
inline std::optional<NonwanderingReport::Certificate> wandering_certificate(const TimeVaryingSystem& F, PointId x,
                                                                            const std::vector<Length>& radii,
                                                                            std::int64_t horizon) {
  const auto& X = *F.space();
  for (const auto& rho : radii) {
    const auto U = X.ball(x, rho, false);
    const auto members = U.members();
    for (std::int64_t n = 0; n <= horizon; ++n) {
      bool returns = false;
      for (std::int64_t m = n; m <= horizon && !returns; ++m) {
        std::vector<PointId> fw = members, bw = members;
        for (std::int64_t r = 0; r <= horizon && !returns; ++r) {
          const auto& f = F.map(m + r);
          for (std::size_t i = 0; i < members.size(); ++i) {
            fw[i] = f(fw[i]);
            bw[i] = f.inverse_at(bw[i]);
            if (U.contains(fw[i]) || U.contains(bw[i])) {
              returns = true;
              break;
            }
          }
        }
      }
      if (!returns) return NonwanderingReport::Certificate{x, rho, n};
    }
  }
  return std::nullopt;
}

inline PointSet nonwandering_only(const TimeVaryingSystem& F, const std::vector<Length>& radii, std::int64_t horizon,
                                  std::vector<NonwanderingReport::Certificate>* certs) {
  const auto size = F.size();
  std::vector<std::optional<NonwanderingReport::Certificate>> found(size);
  parallel_for(size, [&](std::size_t x) {
    found[x] = wandering_certificate(F, static_cast<PointId>(x), radii, horizon);
  });
  PointSet s(size);
  for (PointId x = 0; x < size; ++x) {
    if (!found[x])
      s.insert(x);
    else if (certs)
      certs->push_back(*found[x]);
  }
  return s;
}

}  // namespace detail

/// Omega(F) with open sets ranging over balls of the listed radii. Windows start
/// at m in [n, horizon] and have length r + 1 with r in [0, horizon].
inline NonwanderingReport nonwandering_set(const TimeVaryingSystem& F, const std::vector<Length>& radii,
                                           std::int64_t horizon) {
  if (radii.empty()) throw Error("nonwandering_set needs at least one radius");
  F.check_horizon(2 * horizon + 1);
  NonwanderingReport rep;
  rep.set = detail::nonwandering_only(F, radii, horizon, &rep.wandering);
  if (2 * horizon + 3 <= F.horizon_bound())
    rep.horizon_sensitive = !(detail::nonwandering_only(F, radii, horizon + 1, nullptr) == rep.set);
  return rep;
}

/// Points whose omega-limit set over the tail is the whole carrier.
inline PointSet transitive_points(const TimeVaryingSystem& F, const TailWindow& w) {
  w.validate();
  PointSet s(F.size());
  for (PointId x = 0; x < F.size(); ++x)
    if (limit_set(F, x, LimitKind::omega, w).set.is_full()) s.insert(x);
  return s;
}

}  // namespace nadyn
