#pragma once

#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "nadyn/metric_space.hpp"
#include "nadyn/point_set.hpp"
#include "nadyn/system.hpp"

namespace nadyn {

/// Nonnegative exact mass per point with a negligibility threshold tau.
/// Weights are kept as integer numerators over one common denominator so set
/// masses are integer sums.
class GridMeasure {
 public:
  enum class Kind { uniform, weighted, dirac };

  static GridMeasure uniform(std::size_t n, std::optional<Mass> tau = std::nullopt) {
    if (n == 0) throw Error("uniform measure on an empty carrier");
    return GridMeasure(Kind::uniform, std::vector<std::int64_t>(n, 1), static_cast<std::int64_t>(n), tau);
  }

  static GridMeasure dirac(std::size_t n, PointId at, std::optional<Mass> tau = std::nullopt) {
    if (at >= n) throw Error("dirac point " + std::to_string(at) + " outside carrier");
    std::vector<std::int64_t> w(n, 0);
    w[at] = 1;
    return GridMeasure(Kind::dirac, std::move(w), 1, tau);
  }

  static GridMeasure weighted(const std::vector<Mass>& weights, std::optional<Mass> tau = std::nullopt) {
    if (weights.empty()) throw Error("weighted measure on an empty carrier");
    std::int64_t den = 1;
    bool any = false;
    for (std::size_t i = 0; i < weights.size(); ++i) {
      if (weights[i] < 0) throw Error("negative weight " + to_string(weights[i]) + " at point " + std::to_string(i));
      if (weights[i] > 0) any = true;
      den = std::lcm(den, weights[i].denominator());
    }
    if (!any) throw Error("all weights are zero");
    std::vector<std::int64_t> num(weights.size());
    for (std::size_t i = 0; i < weights.size(); ++i)
      num[i] = weights[i].numerator() * (den / weights[i].denominator());
    return GridMeasure(Kind::weighted, std::move(num), den, tau);
  }

  Kind kind() const { return kind_; }
  std::size_t size() const { return num_.size(); }
  Mass weight(PointId p) const { return Mass(num_.at(p), den_); }
  Mass total() const { return Mass(total_num_, den_); }
  const Mass& tau() const { return tau_; }

  Mass mass(const PointSet& S) const {
    check(S);
    std::int64_t s = 0;
    S.for_each([&](PointId p) { s += num_[p]; });
    return Mass(s, den_);
  }

  /// mass(S) <= tau, the finite stand-in for measure zero.
  bool negligible(const PointSet& S) const { return mass(S) <= tau_; }
  bool negligible(const Mass& m) const { return m <= tau_; }

  /// Largest single-point weight is at most bound.
  bool nonatomic(const Mass& bound) const { return max_atom() <= bound; }

  Mass max_atom() const {
    std::int64_t best = 0;
    for (auto w : num_) best = std::max(best, w);
    return Mass(best, den_);
  }

  GridMeasure with_tau(const Mass& tau) const {
    GridMeasure m = *this;
    if (tau < 0) throw Error("negative tau");
    m.tau_ = tau;
    return m;
  }

  /// Restriction to a sub-carrier listed by parent ids (tau kept).
  GridMeasure restricted(const std::vector<PointId>& to_parent) const {
    std::vector<std::int64_t> w;
    for (auto p : to_parent) w.push_back(num_.at(p));
    GridMeasure m(Kind::weighted, std::move(w), den_, tau_);
    return m;
  }

  const std::vector<std::int64_t>& numerators() const { return num_; }
  std::int64_t denominator() const { return den_; }

 private:
  GridMeasure(Kind kind, std::vector<std::int64_t> num, std::int64_t den, std::optional<Mass> tau)
      : kind_(kind), num_(std::move(num)), den_(den) {
    total_num_ = std::accumulate(num_.begin(), num_.end(), std::int64_t{0});
    // Default threshold: total / |X|, i.e. 1/|X| for probability measures.
    tau_ = tau ? *tau : Mass(total_num_, den_) / Mass(static_cast<std::int64_t>(num_.size()));
    if (tau_ < 0) throw Error("negative tau");
  }

  void check(const PointSet& S) const {
    if (S.universe() != num_.size()) throw Error("point set and measure live on different carriers");
  }

  Kind kind_;
  std::vector<std::int64_t> num_;
  std::int64_t den_;
  std::int64_t total_num_ = 0;
  Mass tau_;
};

inline GridMeasure make_measure(const FiniteMetricSpace& X, GridMeasure::Kind kind, const std::vector<Mass>& weights = {},
                                PointId dirac_at = 0, std::optional<Mass> tau = std::nullopt) {
  switch (kind) {
    case GridMeasure::Kind::uniform:
      return GridMeasure::uniform(X.size(), tau);
    case GridMeasure::Kind::dirac:
      X.check(dirac_at);
      return GridMeasure::dirac(X.size(), dirac_at, tau);
    case GridMeasure::Kind::weighted:
      if (weights.size() != X.size())
        throw Error("weight table has " + std::to_string(weights.size()) + " entries for " + std::to_string(X.size()) +
                    " points");
      return GridMeasure::weighted(weights, tau);
  }
  throw Error("unknown measure kind");
}

/// h_*(mu)(A) = mu(h(A)); for a bijection the weight at y becomes mu({h(y)}).
inline GridMeasure pushforward(const GridMeasure& mu, const MapTable& h) {
  if (h.size() != mu.size()) throw Error("pushforward map and measure live on different carriers");
  std::vector<Mass> w(mu.size());
  for (PointId y = 0; y < w.size(); ++y) w[y] = mu.weight(h(y));
  return GridMeasure::weighted(w, mu.tau());
}

}  // namespace nadyn
