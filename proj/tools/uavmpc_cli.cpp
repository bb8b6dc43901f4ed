/*
 Copyright 2026 The uavmpc Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "uavmpc/uavmpc.h"

namespace {

constexpr int kUsageExit = 64;

struct Options {
  std::string config;
  std::uint64_t seed = 0;
  bool seed_set = false;
  double disturbance = 0.0;
  bool disturbance_set = false;
  std::string scheme;
  std::string out;
  std::string format = "json";
  std::vector<std::string> set;
  // sweep
  std::string parameter;
  std::vector<double> grid;
  std::vector<std::string> schemes;
  std::vector<std::uint64_t> seeds;
  bool fixed_trajectory = false;
  int workers = 0;
};

int report(int exit_code, const std::string& kind, const std::string& message) {
  nlohmann::ordered_json j;
  j["error"] = {{"status", kind}, {"code", exit_code}, {"message", message}};
  std::cerr << j.dump() << "\n";
  return exit_code;
}

int report(uavmpc_status s) {
  return report(static_cast<int>(s), uavmpc_status_name(s), uavmpc_last_error());
}

struct ConfigHandle {
  uavmpc_config* ptr = nullptr;
  ~ConfigHandle() { uavmpc_config_free(ptr); }
};

struct ResultHandle {
  uavmpc_result* ptr = nullptr;
  ~ResultHandle() { uavmpc_result_free(ptr); }
};

/// Builds the config from the flags; returns 0 or the reported exit code.
int make_config(const Options& o, ConfigHandle& cfg) {
  uavmpc_status s = o.config.empty() ? uavmpc_config_new(&cfg.ptr)
                                     : uavmpc_config_load_file(o.config.c_str(), &cfg.ptr);
  if (s != UAVMPC_OK) return report(s);
  for (const std::string& kv : o.set) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      return report(kUsageExit, "usage", "--set expects KEY=VALUE, got '" + kv + "'");
    }
    s = uavmpc_config_set(cfg.ptr, kv.substr(0, eq).c_str(), kv.substr(eq + 1).c_str());
    if (s != UAVMPC_OK) return report(s);
  }
  if (o.seed_set && (s = uavmpc_config_set_seed(cfg.ptr, o.seed)) != UAVMPC_OK) return report(s);
  if (o.disturbance_set && (s = uavmpc_config_set_disturbance(cfg.ptr, o.disturbance)) != UAVMPC_OK) {
    return report(s);
  }
  return 0;
}

/// Writes to stdout, or to DIR/<stem>.<format> when --out is given.
int emit(const Options& o, const uavmpc_result* res, const std::string& stem) {
  const std::string text = o.format == "csv" ? uavmpc_result_csv(res) : uavmpc_result_json(res);
  if (o.out.empty()) {
    std::cout << text;
    return 0;
  }
  std::error_code ec;
  std::filesystem::create_directories(o.out, ec);
  const std::filesystem::path path = std::filesystem::path(o.out) / (stem + "." + o.format);
  std::ofstream f(path, std::ios::binary);
  if (f) f << text;
  if (ec || !f) return report(UAVMPC_ERR_IO, "io", "cannot write " + path.string());
  std::cout << path.string() << "\n";
  return 0;
}

std::string seed_tag(const Options& o) {
  return o.seed_set ? "_seed" + std::to_string(o.seed) : "";
}

int cmd_run(const Options& o, bool baseline) {
  ConfigHandle cfg;
  if (const int rc = make_config(o, cfg); rc != 0) return rc;
  ResultHandle res;
  const std::string scheme = o.scheme.empty() ? "mpc" : o.scheme;
  const uavmpc_status s = baseline ? uavmpc_baseline(cfg.ptr, scheme.c_str(), &res.ptr)
                                   : uavmpc_run(cfg.ptr, scheme.c_str(), &res.ptr);
  if (s != UAVMPC_OK) return report(s);
  return emit(o, res.ptr, scheme + seed_tag(o));
}

int cmd_sweep(const Options& o) {
  ConfigHandle cfg;
  if (const int rc = make_config(o, cfg); rc != 0) return rc;
  std::vector<const char*> names;
  for (const auto& n : o.schemes) names.push_back(n.c_str());
  std::vector<std::uint64_t> seeds = o.seeds;
  if (seeds.empty()) seeds.push_back(o.seed_set ? o.seed : 1);
  uavmpc_sweep_spec spec{};
  spec.parameter = o.parameter.c_str();
  spec.grid = o.grid.data();
  spec.grid_len = o.grid.size();
  spec.schemes = names.data();
  spec.scheme_count = names.size();
  spec.seeds = seeds.data();
  spec.seed_count = seeds.size();
  spec.fixed_trajectory = o.fixed_trajectory ? 1 : 0;
  spec.workers = o.workers;
  ResultHandle res;
  if (const uavmpc_status s = uavmpc_sweep(cfg.ptr, &spec, &res.ptr); s != UAVMPC_OK) {
    return report(s);
  }
  return emit(o, res.ptr, "sweep_" + o.parameter);
}

int cmd_audit(const Options& o) {
  ConfigHandle cfg;
  if (const int rc = make_config(o, cfg); rc != 0) return rc;
  ResultHandle res;
  if (const uavmpc_status s = uavmpc_audit(cfg.ptr, &res.ptr); s != UAVMPC_OK) return report(s);
  return emit(o, res.ptr, "audit" + seed_tag(o));
}

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--config", o.config, "Scenario file (key = value lines)")->check(CLI::ExistingFile);
  sub->add_option("--set", o.set, "Override a config field, KEY=VALUE (repeatable)");
  sub->add_option_function<std::uint64_t>(
      "--seed", [&o](const std::uint64_t& v) { o.seed = v; o.seed_set = true; }, "Scenario seed");
  sub->add_option_function<double>(
      "--disturbance", [&o](const double& v) { o.disturbance = v; o.disturbance_set = true; },
      "Disturbance bound in meters");
  sub->add_option("--out", o.out, "Output directory (default: stdout)");
  sub->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Receding-horizon UAV trajectory and URLLC beamforming simulator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(uavmpc_version()));
  Options o;

  CLI::App* run = app.add_subcommand("run", "Fly one mission");
  add_common(run, o);
  run->add_option("--scheme", o.scheme, "mpc, offline-mpc or offline-joint");

  CLI::App* baseline = app.add_subcommand("baseline", "Run a comparison scheme");
  add_common(baseline, o);
  baseline->add_option("--scheme", o.scheme,
                       "offline-mpc, offline-joint, bf-proposed, bf-mrt, bf-zf or bf-equal")
      ->required();

  CLI::App* sweep = app.add_subcommand("sweep", "Sweep one parameter over seeds and schemes");
  add_common(sweep, o);
  sweep->add_option("--param", o.parameter,
                    "comm_power_max_w, num_antennas, blocklength, rate_min_nats or disturbance_m")
      ->required();
  sweep->add_option("--grid", o.grid, "Grid values")->required()->delimiter(',');
  sweep->add_option("--scheme", o.schemes, "Schemes (comma separated)")->required()->delimiter(',');
  sweep->add_option("--seeds", o.seeds, "Seeds (comma separated)")->delimiter(',');
  sweep->add_flag("--fixed-trajectory", o.fixed_trajectory,
                  "Evaluate beamformers along the undisturbed closed-loop path");
  sweep->add_option("--workers", o.workers, "Concurrent cells (0: all cores)")
      ->check(CLI::NonNegativeNumber);

  CLI::App* audit = app.add_subcommand("audit", "Surrogate bound and concavity audits");
  add_common(audit, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report(kUsageExit, "usage", e.what());
  }

  if (*run) return cmd_run(o, false);
  if (*baseline) return cmd_run(o, true);
  if (*sweep) return cmd_sweep(o);
  return cmd_audit(o);
}
