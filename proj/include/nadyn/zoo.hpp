#pragma once

#include <cstdint>
#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nadyn/metric_space.hpp"
#include "nadyn/system.hpp"

namespace nadyn::zoo {

using Params = std::map<std::string, std::int64_t>;

struct Entry {
  std::string name;
  std::string params;      ///< accepted parameters
  std::string carrier;
  std::string description;
};

inline const std::vector<Entry>& catalogue() {
  static const std::vector<Entry> entries{
      {"identity", "q", "circle(q)", "f_n = id for every n"},
      {"rotation", "q, step=1", "circle(q)", "f_n(x) = x + step mod q (isometry)"},
      {"cat", "q", "torus2d(q)", "f_n(x, y) = (2x + y, x + y) mod q"},
      {"affine", "q (prime)", "circle(q)", "f_n(x) = m_n x mod q, m_n cycling over 1..q-1"},
      {"cat_iso", "q, depth=15", "torus2d(q)",
       "f_n = point reflection (x, y) -> (-x, -y) at n = 1, 3, 6, 10, 15, ... up to depth, cat map otherwise"},
      {"alternate", "q", "torus2d(q)", "f_n = cat map for odd n, its inverse for even n"},
  };
  return entries;
}

inline MapTable cat_map(const FiniteMetricSpace& X) {
  std::vector<PointId> f(X.size());
  for (PointId p = 0; p < X.size(); ++p) {
    auto [x, y] = X.torus_coords(p);
    f[p] = X.torus_point(2 * x + y, x + y);
  }
  return MapTable::from_forward(std::move(f));
}

inline MapTable point_reflection(const FiniteMetricSpace& X) {
  std::vector<PointId> f(X.size());
  for (PointId p = 0; p < X.size(); ++p) {
    auto [x, y] = X.torus_coords(p);
    f[p] = X.torus_point(-x, -y);
  }
  return MapTable::from_forward(std::move(f));
}

inline MapTable circle_rotation(const FiniteMetricSpace& X, std::int64_t step) {
  const auto q = static_cast<std::int64_t>(X.size());
  std::vector<PointId> f(X.size());
  for (PointId p = 0; p < X.size(); ++p) f[p] = static_cast<PointId>(((p + step) % q + q) % q);
  return MapTable::from_forward(std::move(f));
}

inline MapTable circle_multiply(const FiniteMetricSpace& X, std::int64_t m) {
  const auto q = static_cast<std::int64_t>(X.size());
  std::vector<PointId> f(X.size());
  for (PointId p = 0; p < X.size(); ++p) f[p] = static_cast<PointId>((m * p) % q);
  return MapTable::from_forward(std::move(f));
}

/// Grid translation; an isometry of both grid metrics.
inline MapTable translation(const FiniteMetricSpace& X, std::int64_t a, std::int64_t b = 0) {
  if (X.kind() == FiniteMetricSpace::Kind::circle) return circle_rotation(X, a);
  if (X.kind() != FiniteMetricSpace::Kind::torus2d) throw Error("translation needs a grid carrier");
  std::vector<PointId> f(X.size());
  for (PointId p = 0; p < X.size(); ++p) {
    auto [x, y] = X.torus_coords(p);
    f[p] = X.torus_point(x + static_cast<int>(a), y + static_cast<int>(b));
  }
  return MapTable::from_forward(std::move(f));
}

inline bool is_prime(std::int64_t q) {
  if (q < 2) return false;
  for (std::int64_t d = 2; d * d <= q; ++d)
    if (q % d == 0) return false;
  return true;
}

inline std::int64_t param(const Params& p, const std::string& key, std::optional<std::int64_t> fallback = std::nullopt) {
  if (auto it = p.find(key); it != p.end()) return it->second;
  if (fallback) return *fallback;
  throw Error("zoo parameter '" + key + "' is required");
}

inline TimeVaryingSystem make(const std::string& name, const Params& p, std::int64_t horizon_bound) {
  for (const auto& [key, value] : p) {
    static const std::vector<std::string> known{"q", "step", "depth"};
    if (std::find(known.begin(), known.end(), key) == known.end()) throw Error("unknown zoo parameter '" + key + "'");
  }
  const auto q = param(p, "q");
  if (q < 2 || q > 4096) throw Error("zoo parameter q must lie in [2, 4096], got " + std::to_string(q));
  const int qi = static_cast<int>(q);
  auto label = [&](const std::string& extra = "") { return name + "(" + std::to_string(q) + extra + ")"; };

  if (name == "identity") {
    auto X = FiniteMetricSpace::circle(qi);
    return TimeVaryingSystem(X, {}, {MapTable::identity(X->size())}, horizon_bound, label());
  }
  if (name == "rotation") {
    auto X = FiniteMetricSpace::circle(qi);
    const auto step = param(p, "step", 1);
    return TimeVaryingSystem(X, {}, {circle_rotation(*X, step)}, horizon_bound, label("," + std::to_string(step)));
  }
  if (name == "cat") {
    auto X = FiniteMetricSpace::torus2d(qi);
    return TimeVaryingSystem(X, {}, {cat_map(*X)}, horizon_bound, label());
  }
  if (name == "affine") {
    if (!is_prime(q)) throw Error("affine needs prime q, got " + std::to_string(q));
    auto X = FiniteMetricSpace::circle(qi);
    std::vector<MapTable> cycle;
    for (std::int64_t m = 1; m < q; ++m) cycle.push_back(circle_multiply(*X, m));
    return TimeVaryingSystem(X, {}, std::move(cycle), horizon_bound, label());
  }
  if (name == "cat_iso") {
    auto X = FiniteMetricSpace::torus2d(qi);
    const auto depth = param(p, "depth", 15);
    if (depth < 0) throw Error("cat_iso depth must be nonnegative");
    const auto C = cat_map(*X);
    const auto R = point_reflection(*X);
    std::vector<MapTable> prefix;
    std::int64_t next_triangular = 1, step = 2;
    for (std::int64_t n = 1; n <= depth; ++n) {
      if (n == next_triangular) {
        prefix.push_back(R);
        next_triangular += step++;
      } else {
        prefix.push_back(C);
      }
    }
    return TimeVaryingSystem(X, std::move(prefix), {C}, horizon_bound, label("," + std::to_string(depth)));
  }
  if (name == "alternate") {
    auto X = FiniteMetricSpace::torus2d(qi);
    const auto C = cat_map(*X);
    return TimeVaryingSystem(X, {}, {C, C.inverse()}, horizon_bound, label());
  }
  throw Error("unknown zoo system '" + name + "'");
}

}  // namespace nadyn::zoo
