#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "nadyn/nadyn.hpp"
#include "nadyn/scenario.hpp"

namespace fs = std::filesystem;
using namespace nadyn;

namespace {

constexpr int kConfigError = 2;

int cmd_run(const std::string& config, const std::string& out, unsigned workers) {
  set_workers(workers);
  scenario::Scenario sc;
  try {
    const auto path = fs::absolute(config);
    sc = scenario::load(scenario::read_json_file(path), path.parent_path());
  } catch (const scenario::ConfigError& e) {
    std::cerr << "config error at " << e.what() << '\n';
    return kConfigError;
  } catch (const Error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  }
  const auto res = scenario::run(sc);
  scenario::write(res, out);
  for (const auto& c : res.report["checks"]) {
    std::cout << c["check"].get<std::string>() << ": " << c["verdict"].get<std::string>();
    if (c["expect"] == "must-pass") std::cout << " (must-pass)";
    std::cout << '\n';
  }
  std::cout << "report: " << (fs::path(out) / "report.json").string() << '\n';
  return res.exit_code;
}

zoo::Params parse_params(const std::string& text) {
  zoo::Params p;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw Error("parameter '" + item + "' should look like key=value");
    p[item.substr(0, eq)] = detail::parse_integer(item.substr(eq + 1), item);
  }
  return p;
}

void dump_table(const MapTable& t, std::ostream& out) {
  out << "point,image\n";
  for (PointId x = 0; x < t.size(); ++x) out << x << ',' << t(x) << '\n';
}

int cmd_zoo_dump(const std::string& name, const std::string& params, const std::string& out) {
  const auto F = zoo::make(name, parse_params(params), 1024);
  const auto& X = *F.space();
  fs::create_directories(out);
  {
    std::ofstream m(fs::path(out) / "metric.csv");
    m << "row,col,distance\n";
    for (PointId a = 0; a < X.size(); ++a)
      for (PointId b = a + 1; b < X.size(); ++b) m << a << ',' << b << ',' << to_string(X.distance(a, b)) << '\n';
  }
  scenario::Json sys = scenario::Json::object();
  sys["prefix"] = scenario::Json::array();
  sys["cycle"] = scenario::Json::array();
  auto emit = [&](const std::string& part, const std::vector<MapTable>& tables) {
    for (std::size_t i = 0; i < tables.size(); ++i) {
      const auto file = part + "_" + std::to_string(i + 1) + ".csv";
      std::ofstream f(fs::path(out) / file);
      dump_table(tables[i], f);
      sys[part].push_back(file);
    }
  };
  emit("prefix", F.prefix());
  emit("cycle", F.cycle());
  scenario::Json cfg = scenario::Json::object();
  cfg["schema_version"] = scenario::kSchemaVersion;
  cfg["space"] = {{"kind", "custom"}, {"csv", "metric.csv"}};
  cfg["system"] = {{"custom", sys}};
  cfg["horizon"] = 8;
  cfg["checks"] = scenario::Json::array();
  std::ofstream(fs::path(out) / "config.json") << cfg.dump(2) << '\n';
  std::cout << F.name() << ": " << X.size() << " points, " << F.prefix().size() << " prefix and " << F.cycle().size()
            << " cycle tables written to " << out << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Verification lab for non-autonomous dynamics on finite metric spaces"};
  app.require_subcommand(1);

  std::string config, out = "out";
  unsigned workers = 1;
  auto* run = app.add_subcommand("run", "run a scenario config");
  run->add_option("config", config, "scenario JSON")->required();
  run->add_option("--out", out, "output directory")->capture_default_str();
  run->add_option("--workers", workers, "worker threads")->check(CLI::Range(1u, 256u))->capture_default_str();

  auto* zoo_cmd = app.add_subcommand("zoo", "built-in systems");
  zoo_cmd->require_subcommand(1);
  auto* list = zoo_cmd->add_subcommand("list", "list zoo systems");
  std::string name, params, dump_out = "zoo_dump";
  auto* dump = zoo_cmd->add_subcommand("dump", "write a zoo system as custom CSV tables");
  dump->add_option("name", name)->required();
  dump->add_option("params", params, "e.g. q=5,step=2")->required();
  dump->add_option("--out", dump_out, "output directory")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kConfigError;
  }

  try {
    if (*run) return cmd_run(config, out, workers);
    if (*list) {
      for (const auto& e : zoo::catalogue())
        std::cout << e.name << " [" << e.params << "] on " << e.carrier << ": " << e.description << '\n';
      return 0;
    }
    if (*dump) return cmd_zoo_dump(name, params, dump_out);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigError;
  }
  return 0;
}
