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

#include "uavmpc/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "uavmpc/channel.hpp"
#include "uavmpc/fbl.hpp"

namespace uavmpc {

namespace {

const std::vector<std::pair<SweepParam, std::string>>& param_names() {
  static const std::vector<std::pair<SweepParam, std::string>> names{
      {SweepParam::kCommPower, "comm_power_max_w"},
      {SweepParam::kAntennas, "num_antennas"},
      {SweepParam::kBlocklength, "blocklength"},
      {SweepParam::kRateMin, "rate_min_nats"},
      {SweepParam::kDisturbance, "disturbance_m"},
  };
  return names;
}

std::string format_value(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_number(const std::string& s, int line) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) {
    throw Error(ErrorCode::kParse, "line " + std::to_string(line) + ": bad number '" + s + "'");
  }
  return v;
}

/// Rows of one cell (grid value x seed), or the failure message.
struct CellResult {
  std::vector<ResultRow> rows;
  std::vector<std::string> failures;
};

void add_rows(CellResult& cell, double value, const std::string& scheme, std::uint64_t seed,
              const std::vector<std::pair<std::string, double>>& metrics) {
  for (const auto& [name, v] : metrics) cell.rows.push_back({value, scheme, seed, name, v});
}

CellResult run_cell(const SweepSpec& spec, const ScenarioConfig& base, double value,
                    std::uint64_t seed, const std::vector<Vec3>* fixed_positions) {
  CellResult cell;
  ScenarioConfig cfg = with_sweep_value(base, spec.param, value);
  cfg.rng_seed = seed;
  Rng rng = make_stream(seed, Stream::kUsers);
  const UserSet users = place_users(cfg, rng);
  for (const std::string& scheme : spec.schemes) {
    try {
      if (spec.fixed_trajectory) {
        const auto rates = fixed_trajectory_rates(cfg, users, *fixed_positions, parse_baseline(scheme));
        double sum = 0.0, qos = 0.0, min_rate = 0.0;
        summarize_rates(rates, cfg.rate_min_nats, sum, qos, min_rate);
        add_rows(cell, value, scheme, seed,
                 {{"mean_sum_rate", sum}, {"qos_pct", qos}, {"mean_min_rate", min_rate}});
        continue;
      }
      MissionTrace t;
      if (scheme == "mpc") {
        t = run_mission(cfg, users);
      } else if (scheme == "offline-mpc") {
        t = run_offline_mpc(cfg, users);
      } else if (scheme == "offline-joint") {
        t = run_offline_joint(cfg, users);
      } else {
        throw Error(ErrorCode::kInvalidArgument, "unknown mission scheme '" + scheme + "'");
      }
      std::vector<std::vector<double>> rates;
      for (const auto& s : t.steps) rates.push_back(s.rate);
      double sum = 0.0, qos = 0.0, min_rate = 0.0;
      if (!rates.empty()) summarize_rates(rates, cfg.rate_min_nats, sum, qos, min_rate);
      add_rows(cell, value, scheme, seed,
               {{"terminal_distance_m", t.terminal_distance},
                {"arrived", t.terminal_distance <= cfg.arrival_tolerance_m ? 1.0 : 0.0},
                {"steps", static_cast<double>(t.steps.size())},
                {"energy_j", t.energy_j},
                {"mean_sum_rate", sum},
                {"qos_pct", qos}});
    } catch (const std::exception& e) {
      cell.failures.push_back("value=" + format_value(value) + " seed=" + std::to_string(seed) +
                              " scheme=" + scheme + ": " + e.what());
    }
  }
  return cell;
}

}  // namespace

std::string to_string(SweepParam p) {
  for (const auto& [k, name] : param_names()) {
    if (k == p) return name;
  }
  return "unknown";
}

SweepParam parse_sweep_param(const std::string& name) {
  for (const auto& [k, n] : param_names()) {
    if (n == name) return k;
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown sweep parameter '" + name + "'");
}

ScenarioConfig with_sweep_value(const ScenarioConfig& cfg, SweepParam p, double value) {
  ScenarioConfig c = cfg;
  switch (p) {
    case SweepParam::kCommPower: c.comm_power_max_w = value; break;
    case SweepParam::kAntennas: c.num_antennas = static_cast<int>(std::lround(value)); break;
    case SweepParam::kBlocklength: c.blocklength = static_cast<int>(std::lround(value)); break;
    case SweepParam::kRateMin: c.rate_min_nats = value; break;
    case SweepParam::kDisturbance: c.disturbance_m = value; break;
  }
  const auto bad = validate(c);
  if (!bad.empty()) {
    throw ConfigError(ErrorCode::kConfig, "sweep value " + format_value(value) + " is invalid for " +
                                              to_string(p), bad);
  }
  return c;
}

std::vector<Aggregate> aggregate(const ResultTable& table) {
  std::vector<Aggregate> out;
  std::map<std::tuple<double, std::string, std::string>, std::size_t> index;
  std::vector<std::vector<double>> samples;
  for (const auto& r : table.rows) {
    const auto key = std::make_tuple(r.sweep_value, r.scheme, r.metric);
    auto it = index.find(key);
    if (it == index.end()) {
      it = index.emplace(key, out.size()).first;
      out.push_back({r.sweep_value, r.scheme, r.metric, 0.0, 0.0, 0});
      samples.emplace_back();
    }
    samples[it->second].push_back(r.value);
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto& s = samples[i];
    double mean = 0.0;
    for (double v : s) mean += v;
    mean /= static_cast<double>(s.size());
    double var = 0.0;
    for (double v : s) var += (v - mean) * (v - mean);
    out[i].mean = mean;
    out[i].std_dev = s.size() > 1 ? std::sqrt(var / static_cast<double>(s.size() - 1)) : 0.0;
    out[i].count = static_cast<int>(s.size());
  }
  return out;
}

std::vector<Vec3> reference_trajectory(const ScenarioConfig& cfg, const UserSet& users) {
  ScenarioConfig c = cfg;
  c.disturbance_m = 0.0;
  const MissionTrace t = run_mission(c, users);
  std::vector<Vec3> p;
  for (const auto& s : t.steps) p.push_back(s.position);
  return p;
}

std::vector<std::vector<double>> fixed_trajectory_rates(const ScenarioConfig& cfg,
                                                        const UserSet& users,
                                                        const std::vector<Vec3>& positions,
                                                        BaselineKind kind) {
  const NlosBank bank(cfg.rng_seed, users.size(), cfg.num_antennas);
  const FblParams fbl = FblParams::make(cfg.blocklength, cfg.error_probability);
  const double noise = cfg.noise_power_w();
  const AoOptions ao = AoOptions::from_config(cfg);
  std::vector<std::vector<double>> out;
  for (std::size_t t = 0; t < positions.size(); ++t) {
    const std::vector<CVec> h =
        channel_vectors(channels_at(cfg, users, positions[t], bank, static_cast<int>(t)));
    SlotBeams w;
    if (kind == BaselineKind::kProposed) {
      w = warm_start_slot(h, noise, ao.p2.budget, ao.warm_start_tol, ao.p2.solver).beams;
      double best = 0.0;
      for (double r : slot_rates(h, w, noise, fbl)) best += r;
      for (int i = 0; i < ao.max_iterations; ++i) {
        const P2SlotResult r = solve_p2_slot(h, w, ao.p2);
        if (r.status != SolveStatus::kOptimal) break;
        double sum = 0.0;
        for (double x : slot_rates(h, r.beams, noise, fbl)) sum += x;
        if (sum < best - ao.decrease_tol * std::abs(best)) break;
        const bool small = sum - best <= ao.convergence_tol * std::abs(best);
        w = r.beams;
        best = sum;
        if (small) break;
      }
    } else {
      w = beamform_baseline(kind, h, beam_budget(cfg.comm_power_max_w, cfg.amplifier_efficiency));
    }
    out.push_back(slot_rates(h, w, noise, fbl));
  }
  return out;
}

void summarize_rates(const std::vector<std::vector<double>>& rates, double rate_min,
                     double& mean_sum_rate, double& qos_pct, double& mean_min_rate) {
  if (rates.empty()) throw Error(ErrorCode::kInvalidArgument, "summarize_rates: no steps");
  double sum = 0.0, mins = 0.0;
  for (const auto& r : rates) {
    for (double x : r) sum += x;
    mins += r.empty() ? 0.0 : *std::min_element(r.begin(), r.end());
  }
  mean_sum_rate = sum / static_cast<double>(rates.size());
  mean_min_rate = mins / static_cast<double>(rates.size());
  qos_pct = qos_satisfaction(rates, rate_min);
}

ResultTable run_sweep(const SweepSpec& spec, const ScenarioConfig& cfg) {
  if (spec.grid.empty()) throw Error(ErrorCode::kInvalidArgument, "sweep grid is empty");
  if (spec.seeds.empty()) throw Error(ErrorCode::kInvalidArgument, "sweep needs at least one seed");
  if (spec.schemes.empty()) throw Error(ErrorCode::kInvalidArgument, "sweep needs at least one scheme");
  ResultTable table;
  table.parameter = to_string(spec.param);

  // The fixed trajectory depends only on the seed, not on the swept value.
  std::vector<std::vector<Vec3>> fixed(spec.seeds.size());
  std::vector<std::string> fixed_failure(spec.seeds.size());
  const std::size_t n_cells = spec.grid.size() * spec.seeds.size();
  std::vector<CellResult> cells(n_cells);

  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const unsigned n_workers = spec.workers > 0 ? static_cast<unsigned>(spec.workers) : hw;
  auto parallel = [&](std::size_t count, const std::function<void(std::size_t)>& job) {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    const unsigned n = static_cast<unsigned>(std::min<std::size_t>(n_workers, count));
    for (unsigned i = 0; i < n; ++i) {
      pool.emplace_back([&] {
        for (std::size_t j = next++; j < count; j = next++) job(j);
      });
    }
    for (auto& th : pool) th.join();
  };

  if (spec.fixed_trajectory) {
    parallel(spec.seeds.size(), [&](std::size_t i) {
      try {
        ScenarioConfig c = cfg;
        c.rng_seed = spec.seeds[i];
        Rng rng = make_stream(c.rng_seed, Stream::kUsers);
        fixed[i] = reference_trajectory(c, place_users(c, rng));
        if (fixed[i].empty()) fixed_failure[i] = "reference trajectory has no steps";
      } catch (const std::exception& e) {
        fixed_failure[i] = e.what();
      }
    });
  }
  parallel(n_cells, [&](std::size_t j) {
    const std::size_t gi = j / spec.seeds.size();
    const std::size_t si = j % spec.seeds.size();
    const double value = spec.grid[gi];
    const std::uint64_t seed = spec.seeds[si];
    if (spec.fixed_trajectory && !fixed_failure[si].empty()) {
      cells[j].failures.push_back("value=" + format_value(value) + " seed=" + std::to_string(seed) +
                                  " scheme=*: " + fixed_failure[si]);
      return;
    }
    try {
      cells[j] = run_cell(spec, cfg, value, seed, spec.fixed_trajectory ? &fixed[si] : nullptr);
    } catch (const std::exception& e) {
      cells[j].failures.push_back("value=" + format_value(value) + " seed=" + std::to_string(seed) +
                                  " scheme=*: " + e.what());
    }
  });
  for (auto& c : cells) {
    table.rows.insert(table.rows.end(), c.rows.begin(), c.rows.end());
    table.failures.insert(table.failures.end(), c.failures.begin(), c.failures.end());
  }
  return table;
}

std::string to_csv(const ResultTable& table) {
  std::ostringstream out;
  out << "# schema_version=" << kResultSchemaVersion << "\n";
  out << "# parameter=" << table.parameter << "\n";
  for (const auto& f : table.failures) {
    std::string line = f;
    std::replace(line.begin(), line.end(), '\n', ' ');
    out << "# failure: " << line << "\n";
  }
  out << "schema_version,parameter,sweep_value,scheme,seed,metric,value\n";
  for (const auto& r : table.rows) {
    out << kResultSchemaVersion << ',' << table.parameter << ',' << format_value(r.sweep_value) << ','
        << r.scheme << ',' << r.seed << ',' << r.metric << ',' << format_value(r.value) << "\n";
  }
  return out.str();
}

ResultTable parse_csv(const std::string& text) {
  ResultTable table;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  bool header = false;
  bool version_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line.rfind("# schema_version=", 0) == 0) {
      if (line.substr(17) != std::to_string(kResultSchemaVersion)) {
        throw Error(ErrorCode::kParse, "unsupported schema version '" + line.substr(17) + "'");
      }
      version_seen = true;
      continue;
    }
    if (line.rfind("# parameter=", 0) == 0) {
      table.parameter = line.substr(12);
      continue;
    }
    if (line.rfind("# failure: ", 0) == 0) {
      table.failures.push_back(line.substr(11));
      continue;
    }
    if (line[0] == '#') continue;
    if (!header) {
      if (line != "schema_version,parameter,sweep_value,scheme,seed,metric,value") {
        throw Error(ErrorCode::kParse, "line " + std::to_string(line_no) + ": unexpected header");
      }
      header = true;
      continue;
    }
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (f.size() != 7) throw Error(ErrorCode::kParse, "line " + std::to_string(line_no) + ": expected 7 fields");
    if (f[0] != std::to_string(kResultSchemaVersion)) {
      throw Error(ErrorCode::kParse, "line " + std::to_string(line_no) + ": schema version mismatch");
    }
    if (table.parameter.empty()) table.parameter = f[1];
    if (f[1] != table.parameter) {
      throw Error(ErrorCode::kParse, "line " + std::to_string(line_no) + ": mixed parameters");
    }
    ResultRow r;
    r.sweep_value = parse_number(f[2], line_no);
    r.scheme = f[3];
    r.seed = std::stoull(f[4]);
    r.metric = f[5];
    r.value = parse_number(f[6], line_no);
    table.rows.push_back(std::move(r));
  }
  if (!version_seen || !header) throw Error(ErrorCode::kParse, "missing schema version or header");
  return table;
}

std::string to_json_summary(const ResultTable& table) {
  nlohmann::ordered_json j;
  j["schema_version"] = kResultSchemaVersion;
  j["parameter"] = table.parameter;
  j["rows"] = table.rows.size();
  nlohmann::ordered_json aggs = nlohmann::ordered_json::array();
  for (const auto& a : aggregate(table)) {
    aggs.push_back({{"sweep_value", a.sweep_value},
                    {"scheme", a.scheme},
                    {"metric", a.metric},
                    {"mean", a.mean},
                    {"std", a.std_dev},
                    {"count", a.count}});
  }
  j["aggregates"] = std::move(aggs);
  j["failures"] = table.failures;
  return j.dump(2) + "\n";
}

}  // namespace uavmpc
