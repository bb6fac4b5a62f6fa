#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <memory>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "nadyn/point_set.hpp"
#include "nadyn/rational.hpp"

namespace nadyn {

enum class DistanceMode { raw, bounded };

struct DistanceEntry {
  PointId row;
  PointId col;
  Length distance;
};

/// Finite metric carrier. Distances are integers in units of 1/unit_denominator(),
/// so every radius comparison is exact.
class FiniteMetricSpace {
 public:
  enum class Kind { torus2d, circle, table };

  /// q x q grid on the flat torus with the cyclic max metric scaled by 1/q.
  /// Point (x, y) has id x * q + y.
  static std::shared_ptr<const FiniteMetricSpace> torus2d(int q) {
    if (q < 2) throw Error("torus2d requires q >= 2, got " + std::to_string(q));
    auto s = std::shared_ptr<FiniteMetricSpace>(new FiniteMetricSpace());
    s->kind_ = Kind::torus2d;
    s->q_ = q;
    s->n_ = static_cast<std::size_t>(q) * q;
    s->den_ = q;
    s->name_ = "torus2d(" + std::to_string(q) + ")";
    return s;
  }

  /// q equally spaced points on the circle, d(a, b) = cyclic gap / q.
  static std::shared_ptr<const FiniteMetricSpace> circle(int q) {
    if (q < 2) throw Error("circle requires q >= 2, got " + std::to_string(q));
    auto s = std::shared_ptr<FiniteMetricSpace>(new FiniteMetricSpace());
    s->kind_ = Kind::circle;
    s->q_ = q;
    s->n_ = static_cast<std::size_t>(q);
    s->den_ = q;
    s->name_ = "circle(" + std::to_string(q) + ")";
    return s;
  }

  /// Custom symmetric table. Missing mirrored entries are filled from their
  /// partner; any missing pair, asymmetry or axiom violation is rejected.
  static std::shared_ptr<const FiniteMetricSpace> from_table(std::size_t n, const std::vector<DistanceEntry>& entries,
                                                             std::string name = "custom") {
    if (n == 0) throw Error("custom metric table has no points");
    std::vector<std::optional<Length>> cell(n * n);
    for (const auto& e : entries) {
      if (e.row >= n || e.col >= n)
        throw Error("metric table entry (" + std::to_string(e.row) + "," + std::to_string(e.col) + ") outside " +
                    std::to_string(n) + " points");
      if (e.distance < 0)
        throw Error("negative distance at (" + std::to_string(e.row) + "," + std::to_string(e.col) + ")");
      auto& slot = cell[e.row * n + e.col];
      if (slot && *slot != e.distance)
        throw Error("conflicting entries for (" + std::to_string(e.row) + "," + std::to_string(e.col) + ")");
      slot = e.distance;
    }
    std::int64_t den = 1;
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) {
        auto& ab = cell[a * n + b];
        auto& ba = cell[b * n + a];
        if (a == b && !ab) ab = Length(0);
        if (!ab && ba) ab = ba;
        if (!ab) throw Error("metric table misses pair (" + std::to_string(a) + "," + std::to_string(b) + ")");
        if (ba && *ba != *ab)
          throw Error("metric table is not symmetric at (" + std::to_string(a) + "," + std::to_string(b) + ")");
        den = std::lcm(den, ab->denominator());
      }
    }
    std::vector<std::int64_t> units(n * n);
    for (std::size_t i = 0; i < n * n; ++i) units[i] = cell[i]->numerator() * (den / cell[i]->denominator());
    validate_axioms(n, units, den);
    return make_table(n, std::move(units), den, std::move(name));
  }

  Kind kind() const { return kind_; }
  int q() const { return q_; }
  std::size_t size() const { return n_; }
  const std::string& name() const { return name_; }
  std::int64_t unit_denominator() const { return den_; }

  PointId torus_point(int x, int y) const {
    return static_cast<PointId>(((x % q_ + q_) % q_) * q_ + ((y % q_ + q_) % q_));
  }
  std::pair<int, int> torus_coords(PointId p) const { return {static_cast<int>(p) / q_, static_cast<int>(p) % q_}; }

  /// Distance in integer units (distance * unit_denominator()).
  std::int64_t units(PointId a, PointId b) const {
    switch (kind_) {
      case Kind::circle:
        return circ(static_cast<int>(a), static_cast<int>(b));
      case Kind::torus2d:
        return std::max(circ(static_cast<int>(a) / q_, static_cast<int>(b) / q_),
                        circ(static_cast<int>(a) % q_, static_cast<int>(b) % q_));
      case Kind::table:
        return table_[static_cast<std::size_t>(a) * n_ + b];
    }
    return 0;
  }

  /// Bounded distance d1 = min(d, 1) in units.
  std::int64_t bounded_units(PointId a, PointId b) const { return std::min(units(a, b), den_); }

  Length distance(PointId a, PointId b, DistanceMode mode = DistanceMode::raw) const {
    check(a);
    check(b);
    const auto u = mode == DistanceMode::raw ? units(a, b) : bounded_units(a, b);
    return Length(u, den_);
  }

  Length from_units(std::int64_t u) const { return Length(u, den_); }

  /// Largest unit count k with k / den <= r.
  std::int64_t closed_units(const Length& r) const { return floor_scaled(r, den_); }
  /// Largest unit count k with k / den < r.
  std::int64_t open_units(const Length& r) const { return ceil_scaled(r, den_) - 1; }
  std::int64_t radius_units(const Length& r, bool closed) const { return closed ? closed_units(r) : open_units(r); }

  PointSet ball(PointId center, const Length& radius, bool closed) const {
    check(center);
    if (radius < 0) throw Error("negative ball radius " + to_string(radius));
    const auto k = radius_units(radius, closed);
    PointSet s(n_);
    for (PointId y = 0; y < n_; ++y)
      if (units(center, y) <= k) s.insert(y);
    return s;
  }

  Length diameter() const {
    std::int64_t best = 0;
    for (PointId a = 0; a < n_; ++a)
      for (PointId b = a + 1; b < n_; ++b) best = std::max(best, units(a, b));
    return Length(best, den_);
  }

  /// Sorted distinct positive distances; the default radius / delta grid.
  std::vector<Length> distance_values() const {
    std::set<std::int64_t> vals;
    if (kind_ == Kind::table) {
      for (auto u : table_)
        if (u > 0) vals.insert(u);
    } else {
      const int diam = q_ / 2;
      for (int k = 1; k <= diam; ++k) vals.insert(k);
    }
    std::vector<Length> out;
    for (auto u : vals) out.emplace_back(u, den_);
    return out;
  }

  /// Smallest positive distance in units.
  std::int64_t resolution_units() const {
    if (kind_ != Kind::table) return 1;
    std::int64_t best = 0;
    for (auto u : table_)
      if (u > 0 && (best == 0 || u < best)) best = u;
    return best;
  }

  void check(PointId p) const {
    if (p >= n_) throw Error("unknown point id " + std::to_string(p) + " in " + name_);
  }

  /// Induced metric on a subset; ids are renumbered densely in increasing order.
  std::shared_ptr<const FiniteMetricSpace> subspace(const std::vector<PointId>& keep, std::string name) const {
    if (keep.empty()) throw Error("empty subspace");
    const auto m = keep.size();
    std::vector<std::int64_t> units_table(m * m);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) units_table[i * m + j] = units(keep[i], keep[j]);
    return make_table(m, std::move(units_table), den_, std::move(name));
  }

  bool same_metric_as(const FiniteMetricSpace& o) const {
    if (n_ != o.n_) return false;
    if (kind_ == o.kind_ && kind_ != Kind::table) return q_ == o.q_;
    for (PointId a = 0; a < n_; ++a)
      for (PointId b = 0; b < n_; ++b)
        if (Length(units(a, b), den_) != Length(o.units(a, b), o.den_)) return false;
    return true;
  }

 private:
  FiniteMetricSpace() = default;

  static std::shared_ptr<const FiniteMetricSpace> make_table(std::size_t n, std::vector<std::int64_t> units,
                                                             std::int64_t den, std::string name) {
    auto s = std::shared_ptr<FiniteMetricSpace>(new FiniteMetricSpace());
    s->kind_ = Kind::table;
    s->n_ = n;
    s->den_ = den;
    s->table_ = std::move(units);
    s->name_ = std::move(name);
    return s;
  }

  static void validate_axioms(std::size_t n, const std::vector<std::int64_t>& u, std::int64_t den) {
    auto len = [&](std::size_t a, std::size_t b) { return to_string(Length(u[a * n + b], den)); };
    for (std::size_t a = 0; a < n; ++a) {
      if (u[a * n + a] != 0) throw Error("d(" + std::to_string(a) + "," + std::to_string(a) + ") != 0");
      for (std::size_t b = 0; b < n; ++b)
        if (a != b && u[a * n + b] == 0)
          throw Error("distinct points " + std::to_string(a) + " and " + std::to_string(b) + " at distance 0");
    }
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        for (std::size_t c = 0; c < n; ++c)
          if (u[a * n + c] > u[a * n + b] + u[b * n + c])
            throw Error("triangle inequality violated by triple (" + std::to_string(a) + "," + std::to_string(b) + "," +
                        std::to_string(c) + "): d(" + std::to_string(a) + "," + std::to_string(c) + ")=" + len(a, c) +
                        " > d(" + std::to_string(a) + "," + std::to_string(b) + ")+d(" + std::to_string(b) + "," +
                        std::to_string(c) + ")=" + len(a, b) + "+" + len(b, c));
  }

  std::int64_t circ(int a, int b) const {
    const int g = std::abs(a - b);
    return std::min(g, q_ - g);
  }

  Kind kind_ = Kind::table;
  int q_ = 0;
  std::size_t n_ = 0;
  std::int64_t den_ = 1;
  std::vector<std::int64_t> table_;
  std::string name_;
};

using SpacePtr = std::shared_ptr<const FiniteMetricSpace>;

}  // namespace nadyn
