#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "nadyn/asymptotics.hpp"
#include "nadyn/csv.hpp"
#include "nadyn/expansive.hpp"
#include "nadyn/measure.hpp"
#include "nadyn/shadowing.hpp"
#include "nadyn/stability.hpp"
#include "nadyn/system.hpp"
#include "nadyn/zoo.hpp"

namespace nadyn::scenario {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kVersion = "nadyn 0.1.0";

/// Invalid configuration; path names the offending field (e.g. "checks[2].eps").
class ConfigError : public Error {
 public:
  ConfigError(std::string path, const std::string& message)
      : Error(path + ": " + message), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

inline const std::vector<std::string>& check_names() {
  static const std::vector<std::string> names{
      "expansive",   "generator",   "limits",    "converging",           "aperiodicity",
      "nonwandering", "transitive", "shadowing", "persistence",          "stability",
      "walters",     "conjugacy-invariance", "inverse-invariance", "power-invariance", "thm510"};
  return names;
}

/// Resolved parameters of one check: check-level overrides over top-level values.
struct CheckParams {
  std::int64_t horizon = 0;
  Mass tau;
  std::optional<Length> eps, delta, eps_prime, e;
  std::vector<Length> delta_grid, radii;
  std::uint64_t trials = 20;
  std::optional<std::uint64_t> seed;
  std::optional<PointSet> exclude;
  std::int64_t tail_start = 0;
  std::optional<std::vector<PointId>> points;
  std::int64_t resolution_n = 0;
  std::int64_t k_max = 3;
  std::vector<std::int64_t> ks{2, 3};
  std::vector<std::int64_t> shift{1, 1};
  GeneratorMode mode = GeneratorMode::exhaustive;
  std::uint64_t budget = 5'000'000;
  std::uint64_t samples = 1000;
};

struct CheckSpec {
  std::string name;
  bool must_pass = false;
  CheckParams params;
  Json echo;
};

struct Scenario {
  Json config;  ///< normalized echo; loading it again reproduces this scenario
  std::optional<TimeVaryingSystem> system;
  std::optional<GridMeasure> measure;
  std::int64_t horizon_bound = 1024;
  std::vector<CheckSpec> checks;
};

namespace detail {

inline std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

inline std::int64_t as_int(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) throw ConfigError(path, "expected an integer");
  return j.get<std::int64_t>();
}

inline Length as_length(const Json& j, const std::string& path) {
  if (j.is_number_integer()) return Length(j.get<std::int64_t>());
  if (!j.is_string()) throw ConfigError(path, "expected an exact rational string such as \"1/5\"");
  try {
    return parse_rational(j.get<std::string>());
  } catch (const Error& e) {
    throw ConfigError(path, e.what());
  }
}

inline std::string as_string(const Json& j, const std::string& path) {
  if (!j.is_string()) throw ConfigError(path, "expected a string");
  return j.get<std::string>();
}

inline std::vector<Length> as_lengths(const Json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) throw ConfigError(path, "expected a nonempty array of rationals");
  std::vector<Length> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(as_length(j[i], path + "[" + std::to_string(i) + "]"));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  for (const auto& v : out)
    if (v <= 0) throw ConfigError(path, "values must be positive");
  return out;
}

inline Json lengths_json(const std::vector<Length>& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(to_string(x));
  return a;
}

inline Json set_json(const PointSet& s) {
  Json a = Json::array();
  s.for_each([&](PointId p) { a.push_back(p); });
  return a;
}

inline std::string mask_csv(const PointSet& s) {
  std::ostringstream out;
  out << "point,member\n";
  for (PointId p = 0; p < s.universe(); ++p) out << p << ',' << (s.contains(p) ? 1 : 0) << '\n';
  return out.str();
}

inline std::string resolve_path(const std::string& p, const std::filesystem::path& base) {
  std::filesystem::path path(p);
  if (path.is_relative()) path = base / path;
  return std::filesystem::weakly_canonical(path).string();
}

inline MapTable read_permutation(const std::string& file, std::size_t n, const std::string& path) {
  std::vector<std::int64_t> img(n, -1);
  try {
    for (const auto& row : csv::read(file)) {
      if (row.size() < 2) throw Error("permutation rows need 'point,image'");
      const auto x = csv::to_int(row[0], file);
      const auto y = csv::to_int(row[1], file);
      if (x < 0 || static_cast<std::size_t>(x) >= n) throw Error("point " + std::to_string(x) + " outside carrier");
      img[x] = y;
    }
    std::vector<PointId> f(n);
    for (std::size_t x = 0; x < n; ++x) {
      if (img[x] < 0) throw Error("no image given for point " + std::to_string(x));
      f[x] = static_cast<PointId>(img[x]);
    }
    return MapTable::from_forward(std::move(f));
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(path, e.what());
  }
}

inline SpacePtr build_space(const Json& j, const std::string& path, const std::filesystem::path& base, Json& echo) {
  if (!j.is_object()) throw ConfigError(path, "expected an object");
  const auto kind = as_string(j.value("kind", Json()), join(path, "kind"));
  echo = Json::object();
  echo["kind"] = kind;
  if (kind == "torus2d" || kind == "circle") {
    if (!j.contains("q")) throw ConfigError(join(path, "q"), "required");
    const auto q = as_int(j["q"], join(path, "q"));
    if (q < 2 || q > 4096) throw ConfigError(join(path, "q"), "must lie in [2, 4096]");
    echo["q"] = q;
    return kind == "torus2d" ? FiniteMetricSpace::torus2d(static_cast<int>(q))
                             : FiniteMetricSpace::circle(static_cast<int>(q));
  }
  if (kind == "custom") {
    const auto file = resolve_path(as_string(j.value("csv", Json()), join(path, "csv")), base);
    echo["csv"] = file;
    try {
      std::vector<DistanceEntry> entries;
      std::size_t n = 0;
      for (const auto& row : csv::read(file)) {
        if (row.size() < 3) throw Error("metric rows need 'row,col,distance'");
        const auto a = csv::to_int(row[0], file);
        const auto b = csv::to_int(row[1], file);
        if (a < 0 || b < 0) throw Error("negative point id");
        entries.push_back({static_cast<PointId>(a), static_cast<PointId>(b), parse_rational(row[2])});
        n = std::max<std::size_t>(n, static_cast<std::size_t>(std::max(a, b)) + 1);
      }
      return FiniteMetricSpace::from_table(n, entries, "custom(" + std::filesystem::path(file).filename().string() + ")");
    } catch (const Error& e) {
      throw ConfigError(path, e.what());
    }
  }
  throw ConfigError(join(path, "kind"), "unknown space kind '" + kind + "' (torus2d, circle, custom)");
}

inline const std::set<std::string>& param_keys() {
  static const std::set<std::string> keys{"horizon", "tau",        "eps",     "delta",  "eps_prime",    "e",
                                          "delta_grid", "radii",   "trials",  "seed",   "exclude",      "tail_start",
                                          "points",  "resolution_n", "k_max", "ks",     "shift",        "mode",
                                          "budget",  "samples"};
  return keys;
}

inline const std::set<std::string>& allowed_for(const std::string& check) {
  static const std::map<std::string, std::set<std::string>> table{
      {"expansive", {"delta_grid", "horizon", "tau"}},
      {"generator", {"e", "mode", "budget", "samples", "horizon", "tau", "seed"}},
      {"limits", {"tail_start", "points", "horizon"}},
      {"converging", {"resolution_n", "tail_start", "horizon", "tau"}},
      {"aperiodicity", {"k_max", "horizon", "tau"}},
      {"nonwandering", {"radii", "horizon"}},
      {"transitive", {"tail_start", "horizon", "tau"}},
      {"shadowing", {"eps", "delta", "trials", "seed", "horizon", "exclude", "tau"}},
      {"persistence", {"eps", "delta", "trials", "seed", "horizon", "exclude", "tau"}},
      {"stability", {"eps", "eps_prime", "delta", "trials", "seed", "horizon", "tau"}},
      {"walters", {"eps", "delta_grid", "trials", "seed", "horizon", "tau"}},
      {"conjugacy-invariance", {"shift", "eps", "eps_prime", "delta", "trials", "seed", "horizon", "tau"}},
      {"inverse-invariance", {"delta_grid", "horizon", "tau"}},
      {"power-invariance", {"ks", "delta_grid", "horizon", "tau"}},
      {"thm510", {"eps", "delta", "trials", "seed", "horizon", "radii", "tail_start", "tau"}},
  };
  return table.at(check);
}

inline bool needs_seed(const std::string& check, const CheckParams& p) {
  static const std::set<std::string> sampled{"shadowing", "persistence", "stability", "walters", "conjugacy-invariance",
                                             "thm510"};
  return sampled.count(check) || (check == "generator" && p.mode == GeneratorMode::sampled);
}

/// Parses one parameter value into p and returns its normalized echo.
inline Json parse_param(const std::string& key, const Json& v, const std::string& path, const FiniteMetricSpace& X,
                        CheckParams& p) {
  auto nonneg = [&](std::int64_t x) {
    if (x < 0) throw ConfigError(path, "must be nonnegative");
    return x;
  };
  auto positive_length = [&]() {
    auto l = as_length(v, path);
    if (l <= 0) throw ConfigError(path, "must be positive");
    return l;
  };
  if (key == "horizon") return p.horizon = nonneg(as_int(v, path));
  if (key == "tau") {
    p.tau = as_length(v, path);
    if (p.tau < 0) throw ConfigError(path, "must be nonnegative");
    return to_string(p.tau);
  }
  if (key == "eps") return to_string(*(p.eps = positive_length()));
  if (key == "delta") {
    p.delta = positive_length();
    if (*p.delta > 1) throw ConfigError(path, "delta must not exceed 1");
    return to_string(*p.delta);
  }
  if (key == "eps_prime") return to_string(*(p.eps_prime = positive_length()));
  if (key == "e") return to_string(*(p.e = positive_length()));
  if (key == "delta_grid") return lengths_json(p.delta_grid = as_lengths(v, path));
  if (key == "radii") return lengths_json(p.radii = as_lengths(v, path));
  if (key == "trials") {
    const auto t = as_int(v, path);
    if (t < 1) throw ConfigError(path, "must be at least 1");
    return p.trials = static_cast<std::uint64_t>(t);
  }
  if (key == "seed") {
    if (!v.is_number_unsigned() && !v.is_number_integer()) throw ConfigError(path, "expected an integer seed");
    if (v.is_number_integer() && v.get<std::int64_t>() < 0) throw ConfigError(path, "seed must be nonnegative");
    return *(p.seed = v.get<std::uint64_t>());
  }
  if (key == "exclude" || key == "points") {
    if (!v.is_array()) throw ConfigError(path, "expected an array of point ids");
    std::vector<PointId> ids;
    for (std::size_t i = 0; i < v.size(); ++i) {
      const auto id = as_int(v[i], path + "[" + std::to_string(i) + "]");
      if (id < 0 || static_cast<std::size_t>(id) >= X.size())
        throw ConfigError(path + "[" + std::to_string(i) + "]", "unknown point id " + std::to_string(id));
      ids.push_back(static_cast<PointId>(id));
    }
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    if (key == "exclude")
      p.exclude = PointSet::of(X.size(), ids);
    else
      p.points = ids;
    Json a = Json::array();
    for (auto id : ids) a.push_back(id);
    return a;
  }
  if (key == "tail_start") return p.tail_start = nonneg(as_int(v, path));
  if (key == "resolution_n") {
    p.resolution_n = as_int(v, path);
    if (p.resolution_n < 1) throw ConfigError(path, "must be at least 1");
    return p.resolution_n;
  }
  if (key == "k_max") {
    p.k_max = as_int(v, path);
    if (p.k_max < 1) throw ConfigError(path, "must be at least 1");
    return p.k_max;
  }
  if (key == "ks" || key == "shift") {
    if (!v.is_array() || v.empty()) throw ConfigError(path, "expected a nonempty integer array");
    std::vector<std::int64_t> out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(as_int(v[i], path + "[" + std::to_string(i) + "]"));
    if (key == "ks") {
      for (auto k : out)
        if (k < 1) throw ConfigError(path, "powers must be at least 1");
      p.ks = out;
    } else {
      if (out.size() > 2) throw ConfigError(path, "shift has at most two components");
      p.shift = out;
    }
    Json a = Json::array();
    for (auto x : out) a.push_back(x);
    return a;
  }
  if (key == "mode") {
    const auto m = as_string(v, path);
    if (m == "exhaustive")
      p.mode = GeneratorMode::exhaustive;
    else if (m == "sampled")
      p.mode = GeneratorMode::sampled;
    else
      throw ConfigError(path, "mode must be 'exhaustive' or 'sampled'");
    return m;
  }
  if (key == "budget" || key == "samples") {
    const auto b = as_int(v, path);
    if (b < 1) throw ConfigError(path, "must be at least 1");
    (key == "budget" ? p.budget : p.samples) = static_cast<std::uint64_t>(b);
    return b;
  }
  throw ConfigError(path, "unknown parameter");
}

}  // namespace detail

/// Validates a configuration and resolves every default. Relative CSV paths are
/// taken relative to base_dir.
inline Scenario load(const Json& cfg, const std::filesystem::path& base_dir = ".") {
  using namespace detail;
  if (!cfg.is_object()) throw ConfigError("$", "configuration must be a JSON object");
  static const std::set<std::string> top_keys{"schema_version", "space", "system", "measure", "horizon_bound", "checks"};
  for (const auto& [key, _] : cfg.items())
    if (!top_keys.count(key) && !param_keys().count(key)) throw ConfigError(key, "unknown field");

  Scenario sc;
  Json echo = Json::object();
  if (cfg.contains("schema_version") && as_int(cfg["schema_version"], "schema_version") != kSchemaVersion)
    throw ConfigError("schema_version", "unsupported schema version (expected " + std::to_string(kSchemaVersion) + ")");
  echo["schema_version"] = kSchemaVersion;

  if (cfg.contains("horizon_bound")) {
    sc.horizon_bound = as_int(cfg["horizon_bound"], "horizon_bound");
    if (sc.horizon_bound < 1) throw ConfigError("horizon_bound", "must be positive");
  }

  // Carrier and system.
  if (!cfg.contains("system")) throw ConfigError("system", "required");
  const auto& sys = cfg["system"];
  if (!sys.is_object()) throw ConfigError("system", "expected an object");
  SpacePtr declared;
  Json space_echo;
  if (cfg.contains("space")) declared = build_space(cfg["space"], "space", base_dir, space_echo);
  Json sys_echo = Json::object();
  if (sys.contains("zoo")) {
    const auto name = as_string(sys["zoo"], "system.zoo");
    zoo::Params params;
    sys_echo["zoo"] = name;
    for (const auto& [key, value] : sys.items()) {
      if (key == "zoo") continue;
      params[key] = as_int(value, "system." + key);
      sys_echo[key] = params[key];
    }
    try {
      sc.system.emplace(zoo::make(name, params, sc.horizon_bound));
    } catch (const Error& e) {
      throw ConfigError("system", e.what());
    }
    const auto& X = *sc.system->space();
    if (declared && !declared->same_metric_as(X))
      throw ConfigError("space", "declared space does not match the carrier of zoo system '" + name + "'");
    if (!declared) {
      space_echo = Json::object();
      space_echo["kind"] = X.kind() == FiniteMetricSpace::Kind::torus2d ? "torus2d" : "circle";
      space_echo["q"] = X.q();
    }
  } else if (sys.contains("custom")) {
    if (!declared) throw ConfigError("space", "required for custom systems");
    const auto& c = sys["custom"];
    if (!c.is_object()) throw ConfigError("system.custom", "expected an object");
    std::vector<MapTable> prefix, cycle;
    Json c_echo = Json::object();
    for (const char* part : {"prefix", "cycle"}) {
      const std::string path = std::string("system.custom.") + part;
      Json files = Json::array();
      if (!c.contains(part)) {
        if (std::string(part) == "cycle") throw ConfigError(path, "required");
        c_echo[part] = files;
        continue;
      }
      if (!c[part].is_array()) throw ConfigError(path, "expected an array of CSV paths");
      for (std::size_t i = 0; i < c[part].size(); ++i) {
        const auto ip = path + "[" + std::to_string(i) + "]";
        const auto file = resolve_path(as_string(c[part][i], ip), base_dir);
        files.push_back(file);
        (std::string(part) == "prefix" ? prefix : cycle).push_back(read_permutation(file, declared->size(), ip));
      }
      c_echo[part] = files;
    }
    if (cycle.empty()) throw ConfigError("system.custom.cycle", "must list at least one table");
    sys_echo["custom"] = c_echo;
    sc.system.emplace(declared, std::move(prefix), std::move(cycle), sc.horizon_bound, "custom");
  } else {
    throw ConfigError("system", "expected 'zoo' or 'custom'");
  }
  const auto& X = *sc.system->space();
  echo["space"] = space_echo;
  echo["system"] = sys_echo;

  // Measure.
  Json mu_echo = Json::object();
  const Json mu_cfg = cfg.value("measure", Json{{"kind", "uniform"}});
  if (!mu_cfg.is_object()) throw ConfigError("measure", "expected an object");
  const auto mkind = as_string(mu_cfg.value("kind", Json()), "measure.kind");
  mu_echo["kind"] = mkind;
  std::optional<Mass> tau;
  if (cfg.contains("tau")) {
    tau = as_length(cfg["tau"], "tau");
    if (*tau < 0) throw ConfigError("tau", "must be nonnegative");
  }
  try {
    if (mkind == "uniform") {
      sc.measure = GridMeasure::uniform(X.size(), tau);
    } else if (mkind == "dirac") {
      const auto at = as_int(mu_cfg.value("point", Json()), "measure.point");
      if (at < 0 || static_cast<std::size_t>(at) >= X.size()) throw ConfigError("measure.point", "unknown point id");
      mu_echo["point"] = at;
      sc.measure = GridMeasure::dirac(X.size(), static_cast<PointId>(at), tau);
    } else if (mkind == "weighted") {
      const auto file = resolve_path(as_string(mu_cfg.value("csv", Json()), "measure.csv"), base_dir);
      mu_echo["csv"] = file;
      std::vector<std::optional<Mass>> w(X.size());
      for (const auto& row : csv::read(file)) {
        if (row.size() < 2) throw ConfigError("measure.csv", "weight rows need 'point,weight'");
        const auto p = csv::to_int(row[0], file);
        if (p < 0 || static_cast<std::size_t>(p) >= X.size())
          throw ConfigError("measure.csv", "unknown point id " + std::to_string(p));
        w[p] = parse_rational(row[1]);
      }
      std::vector<Mass> weights;
      for (std::size_t i = 0; i < w.size(); ++i) {
        if (!w[i]) throw ConfigError("measure.csv", "no weight for point " + std::to_string(i));
        weights.push_back(*w[i]);
      }
      sc.measure = GridMeasure::weighted(weights, tau);
    } else {
      throw ConfigError("measure.kind", "unknown measure kind '" + mkind + "' (uniform, dirac, weighted)");
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError("measure", e.what());
  }
  echo["measure"] = mu_echo;

  // Top-level parameter defaults.
  if (!cfg.contains("horizon")) throw ConfigError("horizon", "required");
  CheckParams base;
  base.tau = sc.measure->tau();
  base.delta_grid = X.distance_values();
  base.radii = X.distance_values();
  echo["horizon_bound"] = sc.horizon_bound;
  for (const auto& key : param_keys()) {
    if (key == "tau" || !cfg.contains(key)) continue;
    parse_param(key, cfg[key], key, X, base);
  }
  base.resolution_n = cfg.contains("resolution_n") ? base.resolution_n : 2 * X.unit_denominator();
  base.tail_start = cfg.contains("tail_start") ? base.tail_start : base.horizon / 2;
  // Echo in a fixed key order, with resolved defaults.
  echo["horizon"] = base.horizon;
  echo["tau"] = to_string(base.tau);
  echo["delta_grid"] = lengths_json(base.delta_grid);
  echo["radii"] = lengths_json(base.radii);
  echo["trials"] = base.trials;
  echo["tail_start"] = base.tail_start;
  echo["resolution_n"] = base.resolution_n;
  for (const auto& key : param_keys()) {
    if (echo.contains(key) || !cfg.contains(key)) continue;
    CheckParams scratch = base;
    echo[key] = parse_param(key, cfg[key], key, X, scratch);
  }
  if (base.horizon + 3 > sc.horizon_bound / 2)
    throw ConfigError("horizon_bound", "must be at least 2 * horizon + 6");

  // Checks.
  Json checks_echo = Json::array();
  const Json checks = cfg.value("checks", Json::array());
  if (!checks.is_array()) throw ConfigError("checks", "expected an array");
  for (std::size_t i = 0; i < checks.size(); ++i) {
    const auto path = "checks[" + std::to_string(i) + "]";
    const auto& c = checks[i];
    CheckSpec spec;
    spec.params = base;
    Json over = Json::object();
    if (c.is_string()) {
      spec.name = c.get<std::string>();
    } else if (c.is_object()) {
      spec.name = as_string(c.value("check", Json()), path + ".check");
      over = c;
    } else {
      throw ConfigError(path, "expected a check name or object");
    }
    if (std::find(check_names().begin(), check_names().end(), spec.name) == check_names().end())
      throw ConfigError(path, "unknown check '" + spec.name + "'");
    spec.echo = Json::object();
    spec.echo["check"] = spec.name;
    std::string expect = "none";
    if (over.contains("expect")) {
      expect = as_string(over["expect"], path + ".expect");
      if (expect != "must-pass" && expect != "none") throw ConfigError(path + ".expect", "must be 'must-pass' or 'none'");
    }
    spec.must_pass = expect == "must-pass";
    spec.echo["expect"] = expect;
    const auto& allowed = allowed_for(spec.name);
    for (const auto& [key, value] : over.items()) {
      if (key == "check" || key == "expect") continue;
      if (!allowed.count(key)) throw ConfigError(path + "." + key, "not a parameter of check '" + spec.name + "'");
      spec.echo[key] = parse_param(key, value, path + "." + key, X, spec.params);
    }
    if (!over.contains("tail_start") && over.contains("horizon") && !cfg.contains("tail_start"))
      spec.params.tail_start = spec.params.horizon / 2;
    auto& p = spec.params;
    if (p.horizon + 3 > sc.horizon_bound / 2) throw ConfigError(path + ".horizon", "exceeds horizon_bound / 2 - 3");
    if (p.tail_start > p.horizon) throw ConfigError(path + ".tail_start", "must not exceed horizon");
    if (needs_seed(spec.name, p) && !p.seed) throw ConfigError(path + ".seed", "a seed is mandatory for sampled checks");
    static const std::set<std::string> uses_eps{"shadowing", "persistence", "stability", "walters",
                                                "conjugacy-invariance", "thm510"};
    static const std::set<std::string> uses_delta{"shadowing", "persistence", "stability", "conjugacy-invariance",
                                                  "thm510"};
    if (uses_eps.count(spec.name) && !p.eps) throw ConfigError(path + ".eps", "required by check '" + spec.name + "'");
    if (uses_delta.count(spec.name) && !p.delta)
      throw ConfigError(path + ".delta", "required by check '" + spec.name + "'");
    if (spec.name == "aperiodicity" && p.k_max > p.horizon)
      throw ConfigError(path + ".k_max", "must not exceed horizon");
    if (spec.name == "converging" || spec.name == "limits" || spec.name == "transitive" || spec.name == "thm510")
      if (p.horizon < 1) throw ConfigError(path + ".horizon", "must be at least 1");
    if (spec.name == "stability" && p.eps_prime && *p.eps_prime > *p.eps)
      throw ConfigError(path + ".eps_prime", "must not exceed eps");
    if (spec.name == "conjugacy-invariance" && X.kind() == FiniteMetricSpace::Kind::table)
      throw ConfigError(path, "conjugacy-invariance needs a grid carrier for translations");
    if (spec.name == "power-invariance")
      for (auto k : p.ks)
        if (k > p.horizon) throw ConfigError(path + ".ks", "powers must not exceed horizon");
    checks_echo.push_back(spec.echo);
    sc.checks.push_back(std::move(spec));
  }
  echo["checks"] = checks_echo;
  sc.config = echo;
  return sc;
}

namespace detail {

/// Resolved values of every parameter a check reads.
inline Json effective_params(const CheckSpec& spec) {
  const auto& p = spec.params;
  Json j = Json::object();
  auto opt_len = [](const std::optional<Length>& v) { return v ? Json(to_string(*v)) : Json(); };
  for (const auto& key : allowed_for(spec.name)) {
    if (key == "horizon") j[key] = p.horizon;
    else if (key == "tau") j[key] = to_string(p.tau);
    else if (key == "eps") j[key] = opt_len(p.eps);
    else if (key == "delta") j[key] = opt_len(p.delta);
    else if (key == "eps_prime") j[key] = p.eps_prime ? Json(to_string(*p.eps_prime)) : Json("auto");
    else if (key == "e") j[key] = p.e ? Json(to_string(*p.e)) : Json("auto");
    else if (key == "delta_grid") j[key] = lengths_json(p.delta_grid);
    else if (key == "radii") j[key] = lengths_json(p.radii);
    else if (key == "trials") j[key] = p.trials;
    else if (key == "seed") j[key] = p.seed ? Json(*p.seed) : Json();
    else if (key == "exclude") j[key] = p.exclude ? set_json(*p.exclude) : Json::array();
    else if (key == "tail_start") j[key] = p.tail_start;
    else if (key == "points") j[key] = p.points ? Json(*p.points) : Json("all");
    else if (key == "resolution_n") j[key] = p.resolution_n;
    else if (key == "k_max") j[key] = p.k_max;
    else if (key == "ks") j[key] = p.ks;
    else if (key == "shift") j[key] = p.shift;
    else if (key == "mode") j[key] = p.mode == GeneratorMode::exhaustive ? "exhaustive" : "sampled";
    else if (key == "budget") j[key] = p.budget;
    else if (key == "samples") j[key] = p.samples;
  }
  return j;
}

}  // namespace detail

struct RunResult {
  Json report;
  int exit_code = 0;
  std::map<std::string, std::string> files;  ///< relative path -> contents (sets/, tables/)
  Json timings;                              ///< wall time per check; kept out of report.json
};

namespace detail {

struct CheckOutcome {
  bool verdict = false;
  Json details = Json::object();
};

inline constexpr std::size_t kMaxWitnesses = 10;

inline Json expansive_json(const ExpansivenessReport& r) {
  Json j = Json::object();
  j["verdict"] = r.verdict;
  j["constant"] = r.constant ? Json(to_string(*r.constant)) : Json();
  j["horizon"] = r.horizon;
  j["tau"] = to_string(r.tau);
  j["nonatomic"] = r.nonatomic;
  j["max_atom"] = to_string(r.max_atom);
  Json scans = Json::array();
  for (const auto& s : r.scans) {
    Json sj = Json::object();
    sj["delta"] = to_string(s.delta);
    sj["max_mass"] = to_string(s.max_mass);
    sj["witness"] = s.witness;
    sj["dynamical_ball"] = set_json(s.witness_ball);
    sj["open_ball_inside"] = s.open_ball_inside;
    scans.push_back(sj);
  }
  j["scans"] = scans;
  return j;
}

inline std::string expansive_table(const ExpansivenessReport& r) {
  std::ostringstream out;
  out << "delta,max_mass,witness,ball_size\n";
  for (const auto& s : r.scans)
    out << to_string(s.delta) << ',' << to_string(s.max_mass) << ',' << s.witness << ',' << s.witness_ball.size()
        << '\n';
  return out.str();
}

inline Json persistence_json(const PersistenceReport& r) {
  Json j = Json::object();
  j["verdict"] = r.verdict;
  j["eps"] = to_string(r.eps);
  j["delta"] = to_string(r.delta);
  j["horizon"] = r.horizon;
  j["seed"] = r.seed;
  j["trial_seeds"] = r.trial_seeds;
  j["B_size"] = r.B.size();
  j["failure_count"] = r.failures.size();
  Json f = Json::array();
  for (std::size_t i = 0; i < std::min(kMaxWitnesses, r.failures.size()); ++i) {
    const auto& w = r.failures[i];
    f.push_back(Json{{"trial", w.trial}, {"seed", w.seed}, {"x", w.x}, {"best_sup", to_string(w.best_sup)}});
  }
  j["failures"] = f;
  return j;
}

inline Json shadowing_json(const ShadowingReport& r) {
  Json j = Json::object();
  j["verdict"] = r.verdict;
  j["eps"] = to_string(r.eps);
  j["delta"] = to_string(r.delta);
  j["horizon"] = r.horizon;
  j["seed"] = r.seed;
  j["B_size"] = r.B.size();
  j["tested"] = r.tested;
  j["failure_count"] = r.failures.size();
  Json f = Json::array();
  for (std::size_t i = 0; i < std::min(kMaxWitnesses, r.failures.size()); ++i) {
    const auto& w = r.failures[i];
    f.push_back(Json{{"source", w.source},
                     {"index", w.index},
                     {"first_index", w.pseudo.lo},
                     {"entries", w.pseudo.points},
                     {"best_sup", to_string(w.best_sup)}});
  }
  j["failures"] = f;
  return j;
}

inline Json stability_json(const StabilityReport& r) {
  Json j = Json::object();
  j["verdict"] = r.verdict;
  j["domain_full"] = r.domain_full;
  j["values_null"] = r.values_null;
  j["near_identity"] = r.near_identity;
  j["orbit_contained"] = r.orbit_contained;
  j["outside_domain_mass"] = to_string(r.outside_domain_mass);
  j["max_value_mass"] = to_string(r.max_value_mass);
  j["max_H_size"] = r.H.max_size();
  if (r.near_identity_witness) j["near_identity_witness"] = *r.near_identity_witness;
  if (r.orbit_witness) j["orbit_witness"] = Json{{"x", r.orbit_witness->first}, {"n", r.orbit_witness->second}};
  return j;
}

inline std::string h_sizes_table(const std::vector<StabilityReport>& reps) {
  std::ostringstream out;
  out << "trial,point,size\n";
  for (std::size_t t = 0; t < reps.size(); ++t)
    for (PointId x = 0; x < reps[t].H.assign.size(); ++x) out << t << ',' << x << ',' << reps[t].H.assign[x].size() << '\n';
  return out.str();
}

inline Length default_eps_prime(const FiniteMetricSpace& X, const CheckParams& p) {
  return p.eps_prime ? *p.eps_prime : radius_strictly_below(X, *p.eps);
}

inline MapTable shift_map(const FiniteMetricSpace& X, const std::vector<std::int64_t>& shift) {
  return zoo::translation(X, shift.at(0), shift.size() > 1 ? shift[1] : 0);
}

class Runner {
 public:
  Runner(const Scenario& sc, std::map<std::string, std::string>& files) : sc_(sc), files_(files) {}

  CheckOutcome run(const CheckSpec& spec, const std::string& tag) {
    tag_ = tag;
    const auto& n = spec.name;
    const auto& p = spec.params;
    if (n == "expansive") return expansive(p);
    if (n == "generator") return generator(p);
    if (n == "limits") return limits(p);
    if (n == "converging") return converging(p);
    if (n == "aperiodicity") return aperiodicity(p);
    if (n == "nonwandering") return nonwandering(p);
    if (n == "transitive") return transitive(p);
    if (n == "shadowing") return shadowing(p);
    if (n == "persistence") return persistence(p);
    if (n == "stability") return stability(p);
    if (n == "walters") return walters(p);
    if (n == "conjugacy-invariance") return conjugacy(p);
    if (n == "inverse-invariance") return inverse(p);
    if (n == "power-invariance") return powers(p);
    if (n == "thm510") return thm510(p);
    throw Error("unknown check " + n);
  }

 private:
  const TimeVaryingSystem& F() const { return *sc_.system; }
  const FiniteMetricSpace& X() const { return *sc_.system->space(); }
  GridMeasure mu(const CheckParams& p) const { return sc_.measure->with_tau(p.tau); }
  void file(const std::string& dir, const std::string& name, std::string contents) {
    files_[dir + "/" + tag_ + "_" + name + ".csv"] = std::move(contents);
  }

  CheckOutcome expansive(const CheckParams& p) {
    const auto r = expansive_verdict(F(), mu(p), p.delta_grid, p.horizon);
    file("tables", "masses", expansive_table(r));
    return {r.verdict, expansive_json(r)};
  }

  CheckOutcome generator(const CheckParams& p) {
    CheckOutcome out;
    auto e = p.e;
    if (!e) {
      const auto r = expansive_verdict(F(), mu(p), X().distance_values(), p.horizon);
      if (!r.verdict) {
        out.details["reason"] = "no expansive constant to build the cover from";
        return out;
      }
      e = r.constant;
    }
    const auto cover = generator_from_constant(X(), *e);
    GeneratorOptions opt{p.mode, p.budget, p.samples, p.seed.value_or(0)};
    const auto r = is_mu_generator(F(), mu(p), cover, p.horizon, std::nullopt, opt);
    out.verdict = r.verdict;
    out.details["e"] = to_string(*e);
    out.details["cover_size"] = cover.sets.size();
    out.details["lebesgue"] = cover.lebesgue ? Json(to_string(*cover.lebesgue)) : Json("unbounded");
    out.details["mode"] = p.mode == GeneratorMode::exhaustive ? "exhaustive" : "sampled";
    out.details["horizon"] = p.horizon;
    out.details["nodes"] = r.nodes;
    if (r.witness_set) {
      out.details["witness_sequence"] = r.witness_sequence;
      out.details["witness_set"] = set_json(*r.witness_set);
      out.details["witness_mass"] = to_string(r.witness_mass);
    }
    return out;
  }

  CheckOutcome limits(const CheckParams& p) {
    const TailWindow w{p.horizon, p.tail_start};
    CheckOutcome out{true, Json::object()};
    Json pts = Json::array();
    std::vector<PointId> points;
    if (p.points)
      points = *p.points;
    else
      for (PointId x = 0; x < X().size(); ++x) points.push_back(x);
    for (auto x : points) {
      const auto om = limit_set(F(), x, LimitKind::omega, w);
      const auto al = limit_set(F(), x, LimitKind::alpha, w);
      out.verdict = out.verdict && om.stabilized && al.stabilized;
      pts.push_back(Json{{"point", x},
                         {"omega", set_json(om.set)},
                         {"alpha", set_json(al.set)},
                         {"stabilized", om.stabilized && al.stabilized}});
    }
    out.details["horizon"] = p.horizon;
    out.details["tail_start"] = p.tail_start;
    out.details["points"] = pts;
    return out;
  }

  CheckOutcome converging(const CheckParams& p) {
    const auto r = converging_set(F(), p.resolution_n, TailWindow{p.horizon, p.tail_start});
    const auto m = mu(p).mass(r.set);
    CheckOutcome out{r.contained && m <= p.tau, Json::object()};
    out.details["set"] = set_json(r.set);
    out.details["mass"] = to_string(m);
    out.details["tau"] = to_string(p.tau);
    out.details["cell_union_size"] = r.cell_union.size();
    out.details["contained_in_cells"] = r.contained;
    out.details["stabilized"] = r.stabilized;
    out.details["resolution_n"] = p.resolution_n;
    file("sets", "converging", mask_csv(r.set));
    return out;
  }

  CheckOutcome aperiodicity(const CheckParams& p) {
    const auto r = aperiodicity_verdict(F(), mu(p), p.k_max, p.horizon);
    CheckOutcome out{r.verdict, Json::object()};
    Json per = Json::array();
    for (std::size_t k = 0; k < r.periodic.size(); ++k)
      per.push_back(Json{{"k", k + 1}, {"points", set_json(r.periodic[k])}, {"mass", to_string(r.masses[k])}});
    out.details["periodic"] = per;
    out.details["horizon"] = r.horizon;
    out.details["tau"] = to_string(r.tau);
    return out;
  }

  CheckOutcome nonwandering(const CheckParams& p) {
    const auto r = nonwandering_set(F(), p.radii, p.horizon);
    CheckOutcome out{r.set.is_full(), Json::object()};
    out.details["set"] = set_json(r.set);
    out.details["horizon"] = p.horizon;
    out.details["horizon_sensitive"] = r.horizon_sensitive;
    Json certs = Json::array();
    for (std::size_t i = 0; i < std::min(kMaxWitnesses, r.wandering.size()); ++i)
      certs.push_back(Json{{"point", r.wandering[i].point},
                           {"radius", to_string(r.wandering[i].radius)},
                           {"start", r.wandering[i].start}});
    out.details["wandering_certificates"] = certs;
    file("sets", "nonwandering", mask_csv(r.set));
    return out;
  }

  CheckOutcome transitive(const CheckParams& p) {
    const auto s = transitive_points(F(), TailWindow{p.horizon, p.tail_start});
    const auto m = mu(p).mass(s);
    CheckOutcome out{m > 0, Json::object()};
    out.details["set"] = set_json(s);
    out.details["mass"] = to_string(m);
    file("sets", "transitive", mask_csv(s));
    return out;
  }

  CheckOutcome shadowing(const CheckParams& p) {
    const auto r = shadowing_verdict(F(), mu(p), *p.eps, *p.delta, p.exclude, p.trials, *p.seed, p.horizon);
    return {r.verdict, shadowing_json(r)};
  }

  CheckOutcome persistence(const CheckParams& p) {
    const auto r = persistence_verdict(F(), mu(p), *p.eps, *p.delta, p.trials, *p.seed, p.horizon, std::nullopt, p.exclude);
    return {r.verdict, persistence_json(r)};
  }

  CheckOutcome stability(const CheckParams& p) {
    const auto eps_prime = default_eps_prime(X(), p);
    const auto trials = perturbation_trials(F(), *p.delta, p.trials, *p.seed);
    CheckOutcome out{true, Json::object()};
    std::vector<StabilityReport> reps;
    Json per = Json::array();
    for (std::size_t t = 0; t < trials.systems.size(); ++t) {
      auto r = stability_check(F(), mu(p), trials.systems[t], *p.eps, eps_prime, p.horizon);
      out.verdict = out.verdict && r.verdict;
      auto j = stability_json(r);
      j["trial"] = t;
      j["seed"] = trials.seeds[t];
      per.push_back(j);
      reps.push_back(std::move(r));
    }
    out.details["eps"] = to_string(*p.eps);
    out.details["eps_prime"] = to_string(eps_prime);
    out.details["delta"] = to_string(*p.delta);
    out.details["horizon"] = p.horizon;
    out.details["trials"] = per;
    file("tables", "H_sizes", h_sizes_table(reps));
    return out;
  }

  CheckOutcome walters(const CheckParams& p) {
    const auto r = walters_pipeline(F(), mu(p), *p.eps, p.delta_grid, p.trials, *p.seed, p.horizon);
    CheckOutcome out{r.outcome == WaltersReport::Outcome::yes, Json::object()};
    out.details["outcome"] = r.outcome == WaltersReport::Outcome::yes ? "yes"
                             : r.outcome == WaltersReport::Outcome::no ? "no"
                                                                       : "not-applicable";
    out.details["reason"] = r.reason;
    out.details["eps"] = to_string(r.eps);
    out.details["horizon"] = r.horizon;
    out.details["tau"] = to_string(r.tau);
    out.details["seed"] = r.seed;
    out.details["e"] = r.e ? Json(to_string(*r.e)) : Json();
    out.details["eps_prime"] = r.eps_prime ? Json(to_string(*r.eps_prime)) : Json();
    out.details["delta"] = r.delta ? Json(to_string(*r.delta)) : Json();
    Json scan = Json::array();
    for (const auto& s : r.persistence_scan) scan.push_back(persistence_json(s));
    out.details["persistence_scan"] = scan;
    Json per = Json::array();
    for (std::size_t t = 0; t < r.stability.size(); ++t) {
      auto j = stability_json(r.stability[t]);
      j["trial"] = t;
      j["seed"] = r.trial_seeds[t];
      per.push_back(j);
    }
    out.details["stability"] = per;
    out.details["max_H_size"] = r.max_H_size;
    if (!r.stability.empty()) file("tables", "H_sizes", h_sizes_table(r.stability));
    return out;
  }

  CheckOutcome conjugacy(const CheckParams& p) {
    const auto h = shift_map(X(), p.shift);
    const auto Fc = conjugate(F(), h);
    const auto m = mu(p);
    const auto mc = pushforward(m, h);
    CheckOutcome out{true, Json::object()};
    auto note = [&](const std::string& what, bool base, bool conj) {
      out.details[what] = Json{{"base", base}, {"conjugated", conj}};
      out.verdict = out.verdict && base == conj;
    };
    const auto grid = X().distance_values();
    const auto e1 = expansive_verdict(F(), m, grid, p.horizon);
    const auto e2 = expansive_verdict(Fc, mc, grid, p.horizon);
    note("expansive", e1.verdict, e2.verdict);
    out.verdict = out.verdict && e1.constant == e2.constant;

    const auto trials = perturbation_trials(F(), *p.delta, p.trials, *p.seed);
    PerturbationTrials mapped{{}, trials.seeds};
    for (const auto& G : trials.systems) mapped.systems.push_back(conjugate(G, h));
    const auto B = PointSet::full(X().size());
    const auto p1 = persistence_with(F(), *p.eps, *p.delta, B, trials, p.horizon);
    const auto p2 = persistence_with(Fc, *p.eps, *p.delta, B, mapped, p.horizon);
    note("persistence", p1.verdict, p2.verdict);

    const auto in = shadowing_inputs(F(), *p.delta, B, p.trials, *p.seed, p.horizon);
    ShadowingInputs in_c{mapped, {}, in.pseudo_kind};
    for (auto seq : in.pseudo) {
      for (auto& x : seq.points) x = h.inverse_at(x);
      in_c.pseudo.push_back(seq);
    }
    const auto s1 = shadowing_with(F(), *p.eps, *p.delta, B, in, p.horizon);
    const auto s2 = shadowing_with(Fc, *p.eps, *p.delta, B, in_c, p.horizon);
    note("shadowing", s1.verdict, s2.verdict);

    const auto eps_prime = default_eps_prime(X(), p);
    bool st1 = true, st2 = true, per_trial = true;
    for (std::size_t t = 0; t < trials.systems.size(); ++t) {
      const bool a = stability_check(F(), m, trials.systems[t], *p.eps, eps_prime, p.horizon).verdict;
      const bool b = stability_check(Fc, mc, mapped.systems[t], *p.eps, eps_prime, p.horizon).verdict;
      st1 = st1 && a;
      st2 = st2 && b;
      per_trial = per_trial && a == b;
    }
    note("stability", st1, st2);
    out.verdict = out.verdict && per_trial;
    out.details["shift"] = p.shift;
    out.details["eps_prime"] = to_string(eps_prime);
    return out;
  }

  CheckOutcome inverse(const CheckParams& p) {
    const auto a = expansive_verdict(F(), mu(p), p.delta_grid, p.horizon);
    const auto b = expansive_verdict(invert(F()), mu(p), p.delta_grid, p.horizon);
    bool same = a.verdict == b.verdict && a.constant == b.constant && a.scans.size() == b.scans.size();
    for (std::size_t i = 0; same && i < a.scans.size(); ++i) same = a.scans[i].max_mass == b.scans[i].max_mass;
    CheckOutcome out{same, Json::object()};
    out.details["base"] = expansive_json(a);
    out.details["inverse"] = expansive_json(b);
    return out;
  }

  CheckOutcome powers(const CheckParams& p) {
    const auto m = mu(p);
    const auto base = expansive_verdict(F(), m, p.delta_grid, p.horizon);
    const auto e = base.constant.value_or(p.delta_grid.back());
    CheckOutcome out{true, Json::object()};
    out.details["base"] = expansive_json(base);
    Json per = Json::array();
    for (auto k : p.ks) {
      const auto delta = *equicontinuity_modulus(F(), e, p.horizon);
      const auto r = expansive_verdict(power(F(), k), m, {delta}, p.horizon / k);
      out.verdict = out.verdict && r.verdict == base.verdict;
      per.push_back(Json{{"k", k},
                         {"delta", to_string(delta)},
                         {"horizon", p.horizon / k},
                         {"verdict", r.verdict},
                         {"max_mass", to_string(r.scans.front().max_mass)}});
    }
    out.details["powers"] = per;
    return out;
  }

  CheckOutcome thm510(const CheckParams& p) {
    const auto m = mu(p);
    const auto pers = persistence_verdict(F(), m, *p.eps, *p.delta, p.trials, *p.seed, p.horizon);
    const TailWindow w{p.horizon, p.tail_start};
    Mass best(0);
    std::optional<std::string> transitive_from;
    std::vector<const TimeVaryingSystem*> candidates{&F()};
    const auto trials = perturbation_trials(F(), *p.delta, p.trials, *p.seed);
    for (const auto& G : trials.systems) candidates.push_back(&G);
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      const auto mass = m.mass(transitive_points(*candidates[i], w));
      if (mass > best) {
        best = mass;
        transitive_from = i == 0 ? "F" : "trial " + std::to_string(i - 1);
      }
    }
    const auto omega = nonwandering_set(F(), p.radii, p.horizon);
    const bool hypothesis = pers.verdict && best > 0;
    CheckOutcome out{!hypothesis || omega.set.is_full(), Json::object()};
    out.details["persistence"] = pers.verdict;
    out.details["transitive_mass"] = to_string(best);
    out.details["transitive_system"] = transitive_from ? Json(*transitive_from) : Json();
    out.details["hypothesis_holds"] = hypothesis;
    out.details["nonwandering_is_carrier"] = omega.set.is_full();
    out.details["nonwandering"] = set_json(omega.set);
    return out;
  }

  const Scenario& sc_;
  std::map<std::string, std::string>& files_;
  std::string tag_;
};

}  // namespace detail

/// Runs every check in order. The report never contains timing data, so a
/// replay of its echoed config reproduces it byte for byte.
inline RunResult run(const Scenario& sc) {
  RunResult res;
  const auto& F = *sc.system;
  const auto& X = *F.space();
  Json report = Json::object();
  report["schema_version"] = kSchemaVersion;
  report["version"] = kVersion;
  report["config"] = sc.config;
  report["carrier"] = Json{{"name", X.name()}, {"points", X.size()}, {"diameter", to_string(X.diameter())}};
  report["system"] = Json{{"name", F.name()}, {"prefix_length", F.prefix_length()}, {"period", F.period()}};
  report["measure"] = Json{{"total", to_string(sc.measure->total())},
                           {"max_atom", to_string(sc.measure->max_atom())},
                           {"tau", to_string(sc.measure->tau())}};
  Json checks = Json::array();
  Json failed = Json::array();
  res.timings = Json::array();
  detail::Runner runner(sc, res.files);
  for (std::size_t i = 0; i < sc.checks.size(); ++i) {
    const auto& spec = sc.checks[i];
    const auto t0 = std::chrono::steady_clock::now();
    std::ostringstream tag;
    tag << (i < 10 ? "0" : "") << i << "_" << spec.name;
    auto outcome = runner.run(spec, tag.str());
    const auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    Json c = Json::object();
    c["check"] = spec.name;
    c["expect"] = spec.must_pass ? "must-pass" : "none";
    c["verdict"] = outcome.verdict ? "yes" : "no";
    c["params"] = detail::effective_params(spec);
    c["details"] = outcome.details;
    checks.push_back(c);
    res.timings.push_back(Json{{"check", spec.name}, {"index", i}, {"wall_ms", ms}});
    if (spec.must_pass && !outcome.verdict) failed.push_back(i);
  }
  report["checks"] = checks;
  res.exit_code = failed.empty() ? 0 : 1;
  report["summary"] = Json{{"checks", sc.checks.size()}, {"must_pass_failed", failed}, {"exit_code", res.exit_code}};
  res.report = report;
  return res;
}

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

inline void write(const RunResult& res, const std::filesystem::path& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  auto put = [&](const fs::path& rel, const std::string& text) {
    const auto path = out_dir / rel;
    fs::create_directories(path.parent_path());
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot write " + path.string());
    f << text;
  };
  put("report.json", dump(res.report));
  put("timings.json", dump(res.timings));
  for (const auto& [rel, text] : res.files) put(rel, text);
}

inline Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("$", "cannot open config '" + path.string() + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("$", std::string("invalid JSON: ") + e.what());
  }
}

}  // namespace nadyn::scenario
