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

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "uavmpc/baselines.hpp"
#include "uavmpc/mpc.hpp"
#include "uavmpc/scenario.hpp"

namespace uavmpc {

inline constexpr int kResultSchemaVersion = 1;

enum class SweepParam { kCommPower, kAntennas, kBlocklength, kRateMin, kDisturbance };

/// "comm_power_max_w", "num_antennas", "blocklength", "rate_min_nats", "disturbance_m".
std::string to_string(SweepParam p);
SweepParam parse_sweep_param(const std::string& name);

/// Copy of `cfg` with the swept parameter set to `value`.
ScenarioConfig with_sweep_value(const ScenarioConfig& cfg, SweepParam p, double value);

struct SweepSpec {
  SweepParam param = SweepParam::kCommPower;
  std::vector<double> grid;
  /// Mission schemes ("mpc", "offline-mpc", "offline-joint") or, with
  /// fixed_trajectory, beamformers ("bf-proposed", "bf-mrt", "bf-zf", "bf-equal").
  std::vector<std::string> schemes;
  std::vector<std::uint64_t> seeds;
  bool fixed_trajectory = false;
  /// Upper bound on concurrent cells; 0 uses the hardware concurrency.
  int workers = 0;
};

struct ResultRow {
  double sweep_value = 0.0;
  std::string scheme;
  std::uint64_t seed = 0;
  std::string metric;
  double value = 0.0;

  bool operator==(const ResultRow&) const = default;
};

struct ResultTable {
  std::string parameter;
  std::vector<ResultRow> rows;
  /// One entry per failed cell: "value=<v> seed=<s> scheme=<name>: <reason>".
  std::vector<std::string> failures;

  bool operator==(const ResultTable&) const = default;
};

struct Aggregate {
  double sweep_value = 0.0;
  std::string scheme;
  std::string metric;
  double mean = 0.0;
  /// Sample standard deviation; 0 for a single seed.
  double std_dev = 0.0;
  int count = 0;
};

/// Mean and sample deviation over seeds, ordered by first appearance.
std::vector<Aggregate> aggregate(const ResultTable& table);

/// Trajectory of an undisturbed closed-loop mission; the first position is the start.
std::vector<Vec3> reference_trajectory(const ScenarioConfig& cfg, const UserSet& users);

/// Per-step, per-user rates of a beamformer along fixed positions. Step t uses
/// the channel realization of mission step t.
std::vector<std::vector<double>> fixed_trajectory_rates(const ScenarioConfig& cfg,
                                                        const UserSet& users,
                                                        const std::vector<Vec3>& positions,
                                                        BaselineKind kind);

/// Time-averaged sum-rate, rate-floor satisfaction and mean weakest-user rate.
void summarize_rates(const std::vector<std::vector<double>>& rates, double rate_min,
                     double& mean_sum_rate, double& qos_pct, double& mean_min_rate);

ResultTable run_sweep(const SweepSpec& spec, const ScenarioConfig& cfg);

/// Long-format CSV with a schema comment line; values printed round-trip exact.
std::string to_csv(const ResultTable& table);
ResultTable parse_csv(const std::string& text);
/// Aggregates and failures as a JSON document.
std::string to_json_summary(const ResultTable& table);

}  // namespace uavmpc
