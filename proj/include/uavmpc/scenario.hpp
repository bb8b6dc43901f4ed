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
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "uavmpc/common.hpp"

namespace uavmpc {

enum class DisturbanceMode { kUniformBall, kFixedMagnitude };

/// Every physical and optimization parameter of a scenario. Values are SI
/// unless the field name says otherwise. Immutable once validated.
struct ScenarioConfig {
  int num_users = 3;
  int num_antennas = 4;
  double corridor_width_m = 200.0;
  double user_height_min_m = 0.5;
  double user_height_max_m = 3.0;
  Vec3 start_m{750.0, 50.0, 500.0};
  Vec3 destination_m{1000.0, 200.0, 300.0};
  double slot_duration_s = 1.0;
  int horizon_slots = 5;
  double max_horizontal_speed_mps = 15.0;
  double max_vertical_speed_mps = 10.0;
  double max_acceleration_mps2 = 4.0;
  double altitude_min_m = 100.0;
  double altitude_max_m = 900.0;
  double x_min_m = -1500.0;
  double x_max_m = 1500.0;
  double y_min_m = -1500.0;
  double y_max_m = 1500.0;
  double bandwidth_hz = 5e6;
  double noise_psd_dbm_per_hz = -174.0;
  double reference_gain = 1e-3;
  double pathloss_exponent = 2.3;
  double rician_k_db = 6.0;
  int blocklength = 1000;
  double error_probability = 1e-5;
  double comm_power_max_w = 1.0;
  double total_power_max_w = 230.0;
  double amplifier_efficiency = 0.5;
  double uav_weight_n = 39.2;
  double air_density_kg_m3 = 1.225;
  double rotor_area_m2 = 0.503;
  double profile_drag_coeff = 0.08;
  // Objective weights. Unset means "derive from geometry / hover power".
  std::optional<double> weight_rate;
  std::optional<double> weight_distance;
  std::optional<double> weight_power;
  int ao_max_iterations = 10;
  double ao_convergence_tol = 1e-7;
  bool ao_stop_on_decrease = true;
  double arrival_tolerance_m = 5.0;
  double disturbance_m = 0.0;
  DisturbanceMode disturbance_mode = DisturbanceMode::kUniformBall;
  double distance_min_m = 1.0;
  double distance_max_m = 2000.0;
  int mission_cap_slots = 30;
  double rate_min_nats = 0.1;
  std::uint64_t rng_seed = 1;
  double solver_tolerance = 1e-8;
  int solver_max_iterations = 200;
  double warm_start_tolerance = 1e-4;

  double noise_power_w() const;
  double hover_power_w() const;
  double effective_weight_rate() const;
  double effective_weight_distance() const;
  double effective_weight_power() const;
  double rician_k_linear() const;
};

/// Field-level invariant violation, e.g. {"error_probability", "must lie in (0, 0.5)"}.
struct ConfigViolation {
  std::string field;
  std::string message;
};

class ConfigError : public Error {
 public:
  ConfigError(ErrorCode code, const std::string& what,
              std::vector<ConfigViolation> violations = {})
      : Error(code, what), violations_(std::move(violations)) {}
  const std::vector<ConfigViolation>& violations() const { return violations_; }

 private:
  std::vector<ConfigViolation> violations_;
};

ScenarioConfig default_scenario();

std::vector<ConfigViolation> validate(const ScenarioConfig& cfg);

/// Parses the flat `key = value` document. Blank lines and `#` comments are
/// ignored; unknown keys and malformed values are parse errors; a parsed
/// config that breaks an invariant raises ConfigError listing every field.
ScenarioConfig load_scenario(const std::string& text);
ScenarioConfig load_scenario_file(const std::string& path);

/// Serializes every key. `load_scenario(to_text(c))` reproduces `c`.
std::string to_text(const ScenarioConfig& cfg);

/// Applies a single `key = value` assignment (same grammar as the document).
void set_field(ScenarioConfig& cfg, const std::string& key,
               const std::string& value);
std::string get_field(const ScenarioConfig& cfg, const std::string& key);
std::vector<std::string> field_names();

struct UserSet {
  std::vector<Vec3> positions;
  int size() const { return static_cast<int>(positions.size()); }
};

using Rng = std::mt19937_64;

/// Independent deterministic streams derived from one seed.
enum class Stream : std::uint32_t {
  kUsers = 1,
  kNlos = 2,
  kDisturbance = 3,
  kAudit = 4,
};

Rng make_stream(std::uint64_t seed, Stream stream, std::uint64_t a = 0,
                std::uint64_t b = 0);

UserSet place_users(const ScenarioConfig& cfg, Rng& rng);

/// Horizontal distance of `p` from the infinite line through the horizontal
/// projections of start and destination.
double corridor_offset(const ScenarioConfig& cfg, const Vec3& p);

}  // namespace uavmpc
