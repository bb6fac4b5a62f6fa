#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nadyn/metric_space.hpp"
#include "nadyn/point_set.hpp"

namespace nadyn {

/// A bijection of a finite carrier together with its inverse.
class MapTable {
 public:
  MapTable() = default;

  static MapTable identity(std::size_t n) {
    std::vector<PointId> f(n);
    std::iota(f.begin(), f.end(), PointId{0});
    return MapTable(f, f);
  }

  /// Rejects non-bijective tables, naming the first collision pair.
  static MapTable from_forward(std::vector<PointId> forward) {
    const auto n = forward.size();
    std::vector<PointId> backward(n, static_cast<PointId>(n));
    for (PointId x = 0; x < n; ++x) {
      const auto y = forward[x];
      if (y >= n) throw Error("map sends " + std::to_string(x) + " to " + std::to_string(y) + " outside the carrier");
      if (backward[y] != n)
        throw Error("map is not bijective: " + std::to_string(backward[y]) + " and " + std::to_string(x) +
                    " both map to " + std::to_string(y));
      backward[y] = x;
    }
    return MapTable(std::move(forward), std::move(backward));
  }

  std::size_t size() const { return forward_.size(); }
  PointId operator()(PointId x) const { return forward_[x]; }
  PointId inverse_at(PointId y) const { return backward_[y]; }
  const std::vector<PointId>& forward() const { return forward_; }
  const std::vector<PointId>& backward() const { return backward_; }

  MapTable inverse() const { return MapTable(backward_, forward_); }

  bool is_identity() const {
    for (PointId x = 0; x < forward_.size(); ++x)
      if (forward_[x] != x) return false;
    return true;
  }

  /// outer o inner
  friend MapTable compose(const MapTable& outer, const MapTable& inner) {
    if (outer.size() != inner.size()) throw Error("composing maps over different carriers");
    std::vector<PointId> f(inner.size());
    for (PointId x = 0; x < f.size(); ++x) f[x] = outer.forward_[inner.forward_[x]];
    return from_forward(std::move(f));
  }

  friend bool operator==(const MapTable& a, const MapTable& b) { return a.forward_ == b.forward_; }

 private:
  MapTable(std::vector<PointId> f, std::vector<PointId> b) : forward_(std::move(f)), backward_(std::move(b)) {}

  std::vector<PointId> forward_;
  std::vector<PointId> backward_;
};

enum class Direction { fwd, inv };

/// Eventually periodic schedule f_1..f_P followed by a repeating cycle.
/// f_0 is the identity and is never stored. Every evaluation is guarded by a
/// hard horizon bound.
class TimeVaryingSystem {
 public:
  TimeVaryingSystem(SpacePtr space, std::vector<MapTable> prefix, std::vector<MapTable> cycle, std::int64_t horizon_bound,
                    std::string name = "system")
      : space_(std::move(space)),
        prefix_(std::move(prefix)),
        cycle_(std::move(cycle)),
        horizon_bound_(horizon_bound),
        name_(std::move(name)) {
    if (!space_) throw Error("system without carrier");
    if (cycle_.empty()) throw Error("system '" + name_ + "' has an empty cycle");
    if (horizon_bound_ < 0) throw Error("negative horizon bound");
    identity_ = MapTable::identity(space_->size());
    auto check = [&](const MapTable& t, std::size_t index) {
      if (t.size() != space_->size())
        throw Error("schedule entry f_" + std::to_string(index) + " has " + std::to_string(t.size()) +
                    " points, carrier has " + std::to_string(space_->size()));
    };
    for (std::size_t i = 0; i < prefix_.size(); ++i) check(prefix_[i], i + 1);
    for (std::size_t i = 0; i < cycle_.size(); ++i) check(cycle_[i], prefix_.size() + i + 1);
  }

  const SpacePtr& space() const { return space_; }
  std::size_t size() const { return space_->size(); }
  const std::vector<MapTable>& prefix() const { return prefix_; }
  const std::vector<MapTable>& cycle() const { return cycle_; }
  std::int64_t horizon_bound() const { return horizon_bound_; }
  const std::string& name() const { return name_; }

  /// f_n for n >= 0.
  const MapTable& map(std::int64_t n) const {
    if (n < 0) throw Error("schedule index must be nonnegative, got " + std::to_string(n));
    if (n == 0) return identity_;
    if (static_cast<std::size_t>(n) <= prefix_.size()) return prefix_[n - 1];
    const auto offset = static_cast<std::size_t>(n) - prefix_.size() - 1;
    return cycle_[offset % cycle_.size()];
  }

  /// Number of schedule indices after which the schedule is periodic.
  std::size_t prefix_length() const { return prefix_.size(); }
  std::size_t period() const { return cycle_.size(); }

  void check_horizon(std::int64_t n) const {
    if (std::llabs(n) > horizon_bound_)
      throw Error("index " + std::to_string(n) + " exceeds horizon bound " + std::to_string(horizon_bound_) + " of " +
                  name_);
  }

 private:
  SpacePtr space_;
  std::vector<MapTable> prefix_;
  std::vector<MapTable> cycle_;
  MapTable identity_;
  std::int64_t horizon_bound_;
  std::string name_;
};

inline TimeVaryingSystem make_system(SpacePtr space, std::vector<MapTable> prefix, std::vector<MapTable> cycle,
                                     std::int64_t horizon_bound, std::string name = "system") {
  return TimeVaryingSystem(std::move(space), std::move(prefix), std::move(cycle), horizon_bound, std::move(name));
}

/// F_n(x). For n < 0 this is f_{|n|}^{-1} o ... o f_1^{-1} applied to x.
inline PointId evaluate(const TimeVaryingSystem& F, std::int64_t n, PointId x) {
  F.check_horizon(n);
  F.space()->check(x);
  if (n >= 0) {
    for (std::int64_t i = 1; i <= n; ++i) x = F.map(i)(x);
  } else {
    for (std::int64_t i = 1; i <= -n; ++i) x = F.map(i).inverse_at(x);
  }
  return x;
}

/// F_[i,j](x) (fwd) or F^{-1}_[i,j](x) (inv); the identity when i > j.
inline PointId window(const TimeVaryingSystem& F, std::int64_t i, std::int64_t j, PointId x, Direction dir) {
  if (i < 0) throw Error("window start must be nonnegative, got " + std::to_string(i));
  F.check_horizon(j);
  F.space()->check(x);
  for (std::int64_t t = i; t <= j; ++t) x = dir == Direction::fwd ? F.map(t)(x) : F.map(t).inverse_at(x);
  return x;
}

/// F_n(x) for every point and every |n| <= N, built incrementally.
class OrbitTable {
 public:
  OrbitTable(const TimeVaryingSystem& F, std::int64_t N) : N_(N), n_(F.size()) {
    if (N < 0) throw Error("negative horizon");
    F.check_horizon(N);
    data_.resize(static_cast<std::size_t>(2 * N + 1) * n_);
    auto row = [&](std::int64_t t) { return data_.begin() + static_cast<std::ptrdiff_t>((t + N) * n_); };
    std::iota(row(0), row(0) + static_cast<std::ptrdiff_t>(n_), PointId{0});
    for (std::int64_t t = 1; t <= N; ++t) {
      const auto& f = F.map(t);
      auto prev_fwd = row(t - 1), cur_fwd = row(t);
      auto prev_bwd = row(-(t - 1)), cur_bwd = row(-t);
      for (std::size_t x = 0; x < n_; ++x) {
        cur_fwd[x] = f(prev_fwd[x]);
        cur_bwd[x] = f.inverse_at(prev_bwd[x]);
      }
    }
  }

  std::int64_t horizon() const { return N_; }
  std::size_t size() const { return n_; }
  PointId at(std::int64_t n, PointId x) const { return data_[static_cast<std::size_t>(n + N_) * n_ + x]; }

 private:
  std::int64_t N_;
  std::size_t n_;
  std::vector<PointId> data_;
};

inline TimeVaryingSystem invert(const TimeVaryingSystem& F) {
  std::vector<MapTable> prefix, cycle;
  for (const auto& t : F.prefix()) prefix.push_back(t.inverse());
  for (const auto& t : F.cycle()) cycle.push_back(t.inverse());
  return TimeVaryingSystem(F.space(), std::move(prefix), std::move(cycle), F.horizon_bound(), "inv(" + F.name() + ")");
}

/// F^k with g_n = F_[(n-1)k+1, nk].
inline TimeVaryingSystem power(const TimeVaryingSystem& F, std::int64_t k) {
  if (k < 1) throw Error("power requires k >= 1, got " + std::to_string(k));
  const auto P = static_cast<std::int64_t>(F.prefix_length());
  const auto C = static_cast<std::int64_t>(F.period());
  const std::int64_t blocks_prefix = (P + k - 1) / k;
  const std::int64_t blocks_cycle = C / std::gcd(C, k);
  auto block = [&](std::int64_t n) {
    MapTable g = MapTable::identity(F.size());
    for (std::int64_t t = (n - 1) * k + 1; t <= n * k; ++t) g = compose(F.map(t), g);
    return g;
  };
  std::vector<MapTable> prefix, cycle;
  for (std::int64_t n = 1; n <= blocks_prefix; ++n) prefix.push_back(block(n));
  for (std::int64_t n = blocks_prefix + 1; n <= blocks_prefix + blocks_cycle; ++n) cycle.push_back(block(n));
  return TimeVaryingSystem(F.space(), std::move(prefix), std::move(cycle), F.horizon_bound() / k,
                           F.name() + "^" + std::to_string(k));
}

/// Schedule indices covering the prefixes and one joint period of F and G.
inline std::int64_t joint_span(const TimeVaryingSystem& F, const TimeVaryingSystem& G) {
  const auto P = static_cast<std::int64_t>(std::max(F.prefix_length(), G.prefix_length()));
  return P + std::lcm(static_cast<std::int64_t>(F.period()), static_cast<std::int64_t>(G.period()));
}

/// Table-wise schedule equality over the whole (eventually periodic) schedule.
inline bool same_schedule(const TimeVaryingSystem& F, const TimeVaryingSystem& G) {
  if (F.size() != G.size()) return false;
  const auto span = joint_span(F, G);
  for (std::int64_t n = 1; n <= span; ++n)
    if (!(F.map(n) == G.map(n))) return false;
  return true;
}

struct Restriction {
  TimeVaryingSystem system;
  std::vector<PointId> to_parent;  ///< sub-carrier id -> parent id
  std::vector<PointId> from_parent;  ///< parent id -> sub-carrier id, or parent size if absent
};

/// Restriction to an invariant subset, on the induced metric.
inline Restriction restrict(const TimeVaryingSystem& F, const PointSet& Y) {
  if (Y.universe() != F.size()) throw Error("restriction set is over a different carrier");
  if (Y.empty()) throw Error("cannot restrict to the empty set");
  const auto keep = Y.members();
  std::vector<PointId> from_parent(F.size(), static_cast<PointId>(F.size()));
  for (PointId i = 0; i < keep.size(); ++i) from_parent[keep[i]] = i;
  auto sub_table = [&](const MapTable& f, std::size_t index) {
    std::vector<PointId> t(keep.size());
    for (PointId i = 0; i < keep.size(); ++i) {
      const auto image = f(keep[i]);
      if (!Y.contains(image))
        throw Error("set is not invariant: f_" + std::to_string(index) + " sends " + std::to_string(keep[i]) + " to " +
                    std::to_string(image) + " outside it");
      t[i] = from_parent[image];
    }
    return MapTable::from_forward(std::move(t));
  };
  std::vector<MapTable> prefix, cycle;
  for (std::size_t i = 0; i < F.prefix().size(); ++i) prefix.push_back(sub_table(F.prefix()[i], i + 1));
  for (std::size_t i = 0; i < F.cycle().size(); ++i)
    cycle.push_back(sub_table(F.cycle()[i], F.prefix_length() + i + 1));
  auto sub = F.space()->subspace(keep, F.space()->name() + "|Y");
  return Restriction{TimeVaryingSystem(sub, std::move(prefix), std::move(cycle), F.horizon_bound(), F.name() + "|Y"),
                     keep, std::move(from_parent)};
}

/// Schedule h^{-1} o f_n o h. h maps the domain carrier onto F's carrier; the
/// result lives on the domain (F's own carrier when domain is null).
inline TimeVaryingSystem conjugate(const TimeVaryingSystem& F, const MapTable& h, SpacePtr domain = nullptr) {
  if (!domain) domain = F.space();
  if (h.size() != F.size() || domain->size() != F.size())
    throw Error("conjugacy needs a bijection between carriers of equal size");
  auto conj = [&](const MapTable& f) {
    std::vector<PointId> t(h.size());
    for (PointId x = 0; x < t.size(); ++x) t[x] = h.inverse_at(f(h(x)));
    return MapTable::from_forward(std::move(t));
  };
  std::vector<MapTable> prefix, cycle;
  for (const auto& f : F.prefix()) prefix.push_back(conj(f));
  for (const auto& f : F.cycle()) cycle.push_back(conj(f));
  return TimeVaryingSystem(domain, std::move(prefix), std::move(cycle), F.horizon_bound(), "conj(" + F.name() + ")");
}

struct SystemComparison {
  Length eta_sup_forward;
  Length eta_sup_backward;
  Length p;
  std::int64_t span;  ///< schedule indices compared
};

/// p(F,G) = max(sup_n eta(f_n, g_n), sup_n eta(f_n^{-1}, g_n^{-1})) with eta the
/// sup of the bounded metric. Exact: the span covers both prefixes and a joint period.
inline SystemComparison system_distance(const TimeVaryingSystem& F, const TimeVaryingSystem& G,
                                        std::optional<std::int64_t> horizon_n = std::nullopt) {
  if (F.size() != G.size() || !F.space()->same_metric_as(*G.space()))
    throw Error("system_distance: carriers differ (" + F.space()->name() + " vs " + G.space()->name() + ")");
  const auto span = joint_span(F, G);
  if (horizon_n && *horizon_n < span)
    throw Error("system_distance: horizon " + std::to_string(*horizon_n) + " does not cover prefix plus joint period " +
                std::to_string(span));
  const auto& X = *F.space();
  std::int64_t fwd = 0, bwd = 0;
  for (std::int64_t n = 1; n <= span; ++n) {
    const auto& f = F.map(n);
    const auto& g = G.map(n);
    for (PointId x = 0; x < F.size(); ++x) {
      fwd = std::max(fwd, X.bounded_units(f(x), g(x)));
      bwd = std::max(bwd, X.bounded_units(f.inverse_at(x), g.inverse_at(x)));
    }
  }
  return {X.from_units(fwd), X.from_units(bwd), X.from_units(std::max(fwd, bwd)), span};
}

/// Largest delta (capped at eps) such that d(x,y) < delta implies
/// d(Phi x, Phi y) < eps for every window map F_[m,n], F^{-1}_[m,n] with
/// 0 <= m <= n <= horizon. On a finite carrier the result is positive whenever eps is.
inline std::optional<Length> equicontinuity_modulus(const TimeVaryingSystem& F, const Length& eps, std::int64_t horizon) {
  if (eps <= 0) throw Error("equicontinuity_modulus requires eps > 0");
  F.check_horizon(horizon);
  const auto& X = *F.space();
  const auto n = F.size();
  const auto eps_open = X.open_units(eps);  // image distances must stay <= this

  std::vector<std::vector<PointId>> windows;
  for (std::int64_t m = 0; m <= horizon; ++m) {
    std::vector<PointId> fw(n), bw(n);
    std::iota(fw.begin(), fw.end(), PointId{0});
    std::iota(bw.begin(), bw.end(), PointId{0});
    for (std::int64_t j = m; j <= horizon; ++j) {
      const auto& f = F.map(j);
      for (PointId x = 0; x < n; ++x) {
        fw[x] = f(fw[x]);
        bw[x] = f.inverse_at(bw[x]);
      }
      windows.push_back(fw);
      windows.push_back(bw);
    }
  }

  // Pairs at distance >= eps already violate through the identity window F_[0,0].
  std::int64_t min_violation = eps_open + 1;
  for (PointId x = 0; x < n; ++x) {
    for (PointId y = x + 1; y < n; ++y) {
      const auto d = X.units(x, y);
      if (d >= min_violation) continue;
      for (const auto& w : windows) {
        if (X.units(w[x], w[y]) > eps_open) {
          min_violation = d;
          break;
        }
      }
    }
  }
  if (min_violation <= 0) return std::nullopt;
  return std::min(eps, X.from_units(min_violation));
}

}  // namespace nadyn
