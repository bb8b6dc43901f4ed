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

#include "uavmpc/scenario.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "uavmpc/propulsion.hpp"

namespace uavmpc {

namespace {

constexpr double kDefaultRateWeight = 1e-4;
constexpr double kDefaultPowerWeightScale = 1e-4;

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  if (t == "inf" || t == "+inf") return std::numeric_limits<double>::infinity();
  if (t == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size()) {
    throw ConfigError(ErrorCode::kParse,
                      "cannot parse '" + t + "' as a number for key " + key,
                      {{key, "not a number"}});
  }
  return v;
}

long long parse_int(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  long long v = 0;
  auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size()) {
    throw ConfigError(ErrorCode::kParse,
                      "cannot parse '" + t + "' as an integer for key " + key,
                      {{key, "not an integer"}});
  }
  return v;
}

bool parse_bool(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  if (t == "true" || t == "1") return true;
  if (t == "false" || t == "0") return false;
  throw ConfigError(ErrorCode::kParse, "expected true/false for key " + key,
                    {{key, "not a boolean"}});
}

struct Field {
  std::function<std::string(const ScenarioConfig&)> get;
  std::function<void(ScenarioConfig&, const std::string&, const std::string&)> set;
};

Field real(double ScenarioConfig::*m) {
  return {[m](const ScenarioConfig& c) { return format_double(c.*m); },
          [m](ScenarioConfig& c, const std::string& k, const std::string& v) {
            c.*m = parse_double(k, v);
          }};
}

Field integer(int ScenarioConfig::*m) {
  return {[m](const ScenarioConfig& c) { return std::to_string(c.*m); },
          [m](ScenarioConfig& c, const std::string& k, const std::string& v) {
            const long long x = parse_int(k, v);
            if (x < std::numeric_limits<int>::min() ||
                x > std::numeric_limits<int>::max()) {
              throw ConfigError(ErrorCode::kParse, "integer out of range for " + k,
                                {{k, "out of range"}});
            }
            c.*m = static_cast<int>(x);
          }};
}

Field component(Vec3 ScenarioConfig::*m, int i) {
  return {[m, i](const ScenarioConfig& c) { return format_double((c.*m)(i)); },
          [m, i](ScenarioConfig& c, const std::string& k, const std::string& v) {
            (c.*m)(i) = parse_double(k, v);
          }};
}

Field optional_real(std::optional<double> ScenarioConfig::*m) {
  return {[m](const ScenarioConfig& c) {
            return (c.*m) ? format_double(*(c.*m)) : std::string("auto");
          },
          [m](ScenarioConfig& c, const std::string& k, const std::string& v) {
            if (trim(v) == "auto") {
              (c.*m).reset();
            } else {
              c.*m = parse_double(k, v);
            }
          }};
}

const std::map<std::string, Field>& fields() {
  static const std::map<std::string, Field> table = [] {
    std::map<std::string, Field> t;
    t["num_users"] = integer(&ScenarioConfig::num_users);
    t["num_antennas"] = integer(&ScenarioConfig::num_antennas);
    t["corridor_width_m"] = real(&ScenarioConfig::corridor_width_m);
    t["user_height_min_m"] = real(&ScenarioConfig::user_height_min_m);
    t["user_height_max_m"] = real(&ScenarioConfig::user_height_max_m);
    t["start_x_m"] = component(&ScenarioConfig::start_m, 0);
    t["start_y_m"] = component(&ScenarioConfig::start_m, 1);
    t["start_z_m"] = component(&ScenarioConfig::start_m, 2);
    t["destination_x_m"] = component(&ScenarioConfig::destination_m, 0);
    t["destination_y_m"] = component(&ScenarioConfig::destination_m, 1);
    t["destination_z_m"] = component(&ScenarioConfig::destination_m, 2);
    t["slot_duration_s"] = real(&ScenarioConfig::slot_duration_s);
    t["horizon_slots"] = integer(&ScenarioConfig::horizon_slots);
    t["max_horizontal_speed_mps"] = real(&ScenarioConfig::max_horizontal_speed_mps);
    t["max_vertical_speed_mps"] = real(&ScenarioConfig::max_vertical_speed_mps);
    t["max_acceleration_mps2"] = real(&ScenarioConfig::max_acceleration_mps2);
    t["altitude_min_m"] = real(&ScenarioConfig::altitude_min_m);
    t["altitude_max_m"] = real(&ScenarioConfig::altitude_max_m);
    t["x_min_m"] = real(&ScenarioConfig::x_min_m);
    t["x_max_m"] = real(&ScenarioConfig::x_max_m);
    t["y_min_m"] = real(&ScenarioConfig::y_min_m);
    t["y_max_m"] = real(&ScenarioConfig::y_max_m);
    t["bandwidth_hz"] = real(&ScenarioConfig::bandwidth_hz);
    t["noise_psd_dbm_per_hz"] = real(&ScenarioConfig::noise_psd_dbm_per_hz);
    t["reference_gain_linear"] = real(&ScenarioConfig::reference_gain);
    t["pathloss_exponent"] = real(&ScenarioConfig::pathloss_exponent);
    t["rician_k_db"] = real(&ScenarioConfig::rician_k_db);
    t["blocklength_channel_uses"] = integer(&ScenarioConfig::blocklength);
    t["error_probability"] = real(&ScenarioConfig::error_probability);
    t["comm_power_max_w"] = real(&ScenarioConfig::comm_power_max_w);
    t["total_power_max_w"] = real(&ScenarioConfig::total_power_max_w);
    t["amplifier_efficiency"] = real(&ScenarioConfig::amplifier_efficiency);
    t["uav_weight_n"] = real(&ScenarioConfig::uav_weight_n);
    t["air_density_kg_per_m3"] = real(&ScenarioConfig::air_density_kg_m3);
    t["rotor_area_m2"] = real(&ScenarioConfig::rotor_area_m2);
    t["profile_drag_coeff"] = real(&ScenarioConfig::profile_drag_coeff);
    t["weight_rate_per_nat"] = optional_real(&ScenarioConfig::weight_rate);
    t["weight_distance_per_m2"] = optional_real(&ScenarioConfig::weight_distance);
    t["weight_power_per_w"] = optional_real(&ScenarioConfig::weight_power);
    t["ao_max_iterations"] = integer(&ScenarioConfig::ao_max_iterations);
    t["ao_convergence_tol"] = real(&ScenarioConfig::ao_convergence_tol);
    t["ao_stop_on_decrease"] = {
        [](const ScenarioConfig& c) {
          return std::string(c.ao_stop_on_decrease ? "true" : "false");
        },
        [](ScenarioConfig& c, const std::string& k, const std::string& v) {
          c.ao_stop_on_decrease = parse_bool(k, v);
        }};
    t["arrival_tolerance_m"] = real(&ScenarioConfig::arrival_tolerance_m);
    t["disturbance_m"] = real(&ScenarioConfig::disturbance_m);
    t["disturbance_mode"] = {
        [](const ScenarioConfig& c) {
          return std::string(c.disturbance_mode == DisturbanceMode::kUniformBall
                                 ? "uniform"
                                 : "fixed");
        },
        [](ScenarioConfig& c, const std::string& k, const std::string& v) {
          const std::string t = trim(v);
          if (t == "uniform") {
            c.disturbance_mode = DisturbanceMode::kUniformBall;
          } else if (t == "fixed") {
            c.disturbance_mode = DisturbanceMode::kFixedMagnitude;
          } else {
            throw ConfigError(ErrorCode::kParse,
                              "disturbance_mode must be uniform or fixed",
                              {{k, "unknown mode"}});
          }
        }};
    t["distance_min_m"] = real(&ScenarioConfig::distance_min_m);
    t["distance_max_m"] = real(&ScenarioConfig::distance_max_m);
    t["mission_cap_slots"] = integer(&ScenarioConfig::mission_cap_slots);
    t["rate_min_nats"] = real(&ScenarioConfig::rate_min_nats);
    t["rng_seed"] = {
        [](const ScenarioConfig& c) { return std::to_string(c.rng_seed); },
        [](ScenarioConfig& c, const std::string& k, const std::string& v) {
          const std::string s = trim(v);
          std::uint64_t x = 0;
          auto res = std::from_chars(s.data(), s.data() + s.size(), x);
          if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size()) {
            throw ConfigError(ErrorCode::kParse, "bad rng_seed", {{k, "not an unsigned integer"}});
          }
          c.rng_seed = x;
        }};
    t["solver_tolerance"] = real(&ScenarioConfig::solver_tolerance);
    t["solver_max_iterations"] = integer(&ScenarioConfig::solver_max_iterations);
    t["warm_start_tolerance"] = real(&ScenarioConfig::warm_start_tolerance);
    return t;
  }();
  return table;
}

}  // namespace

double ScenarioConfig::noise_power_w() const {
  return std::pow(10.0, (noise_psd_dbm_per_hz + 10.0 * std::log10(bandwidth_hz) - 30.0) / 10.0);
}

double ScenarioConfig::hover_power_w() const {
  return hover_power(PropulsionParams::from_config(*this));
}

double ScenarioConfig::effective_weight_rate() const {
  return weight_rate.value_or(kDefaultRateWeight);
}

double ScenarioConfig::effective_weight_distance() const {
  if (weight_distance) return *weight_distance;
  const double span2 = (start_m - destination_m).squaredNorm();
  return span2 > 0.0 ? 1.0 / span2 : 1.0;
}

double ScenarioConfig::effective_weight_power() const {
  if (weight_power) return *weight_power;
  return kDefaultPowerWeightScale / hover_power_w();
}

double ScenarioConfig::rician_k_linear() const {
  return std::pow(10.0, rician_k_db / 10.0);
}

ScenarioConfig default_scenario() { return ScenarioConfig{}; }

std::vector<ConfigViolation> validate(const ScenarioConfig& c) {
  std::vector<ConfigViolation> v;
  auto need = [&v](bool ok, const char* field, const char* msg) {
    if (!ok) v.push_back({field, msg});
  };
  auto finite = [](double x) { return std::isfinite(x); };
  need(c.num_users >= 1, "num_users", "must be >= 1");
  need(c.num_antennas >= 1, "num_antennas", "must be >= 1");
  need(c.corridor_width_m >= 0.0 && finite(c.corridor_width_m), "corridor_width_m",
       "must be finite and >= 0");
  need(c.user_height_min_m <= c.user_height_max_m, "user_height_min_m",
       "must not exceed user_height_max_m");
  need(c.start_m.allFinite(), "start_x_m", "start position must be finite");
  need(c.destination_m.allFinite(), "destination_x_m", "destination must be finite");
  need(c.slot_duration_s > 0.0, "slot_duration_s", "must be > 0");
  need(c.horizon_slots >= 1, "horizon_slots", "must be >= 1");
  need(c.max_horizontal_speed_mps > 0.0, "max_horizontal_speed_mps", "must be > 0");
  need(c.max_vertical_speed_mps > 0.0, "max_vertical_speed_mps", "must be > 0");
  need(c.max_acceleration_mps2 > 0.0, "max_acceleration_mps2", "must be > 0");
  need(c.altitude_min_m < c.altitude_max_m, "altitude_min_m", "must be < altitude_max_m");
  need(c.x_min_m < c.x_max_m, "x_min_m", "must be < x_max_m");
  need(c.y_min_m < c.y_max_m, "y_min_m", "must be < y_max_m");
  need(c.bandwidth_hz > 0.0, "bandwidth_hz", "must be > 0");
  need(finite(c.noise_psd_dbm_per_hz), "noise_psd_dbm_per_hz", "must be finite");
  need(c.reference_gain > 0.0 && finite(c.reference_gain), "reference_gain_linear",
       "must be > 0");
  need(c.pathloss_exponent > 0.0, "pathloss_exponent", "must be > 0");
  need(!std::isnan(c.rician_k_db), "rician_k_db", "must not be NaN");
  need(c.blocklength >= 1, "blocklength_channel_uses", "must be >= 1");
  need(c.error_probability > 0.0 && c.error_probability < 0.5, "error_probability",
       "must lie in (0, 0.5)");
  need(c.comm_power_max_w > 0.0, "comm_power_max_w", "must be > 0");
  need(c.total_power_max_w > 0.0, "total_power_max_w", "must be > 0");
  need(c.amplifier_efficiency > 0.0 && c.amplifier_efficiency <= 1.0,
       "amplifier_efficiency", "must lie in (0, 1]");
  need(c.uav_weight_n > 0.0, "uav_weight_n", "must be > 0");
  need(c.air_density_kg_m3 > 0.0, "air_density_kg_per_m3", "must be > 0");
  need(c.rotor_area_m2 > 0.0, "rotor_area_m2", "must be > 0");
  need(c.profile_drag_coeff > 0.0, "profile_drag_coeff", "must be > 0");
  need(!c.weight_rate || *c.weight_rate >= 0.0, "weight_rate_per_nat", "must be >= 0");
  need(!c.weight_distance || *c.weight_distance >= 0.0, "weight_distance_per_m2",
       "must be >= 0");
  need(!c.weight_power || *c.weight_power >= 0.0, "weight_power_per_w", "must be >= 0");
  need(c.ao_max_iterations >= 0, "ao_max_iterations", "must be >= 0");
  need(c.ao_convergence_tol >= 0.0, "ao_convergence_tol", "must be >= 0");
  need(c.arrival_tolerance_m > 0.0, "arrival_tolerance_m", "must be > 0");
  need(c.disturbance_m >= 0.0 && finite(c.disturbance_m), "disturbance_m", "must be >= 0");
  need(c.distance_min_m > 0.0, "distance_min_m", "must be > 0");
  need(c.distance_max_m > c.distance_min_m, "distance_max_m", "must exceed distance_min_m");
  need(c.mission_cap_slots >= 1, "mission_cap_slots", "must be >= 1");
  need(finite(c.rate_min_nats), "rate_min_nats", "must be finite");
  need(c.solver_tolerance > 0.0 && c.solver_tolerance < 1.0, "solver_tolerance",
       "must lie in (0, 1)");
  need(c.solver_max_iterations >= 1, "solver_max_iterations", "must be >= 1");
  need(c.warm_start_tolerance > 0.0, "warm_start_tolerance", "must be > 0");
  return v;
}

void set_field(ScenarioConfig& cfg, const std::string& key, const std::string& value) {
  const auto& t = fields();
  auto it = t.find(key);
  if (it == t.end()) {
    throw ConfigError(ErrorCode::kParse, "unknown key: " + key, {{key, "unknown key"}});
  }
  it->second.set(cfg, key, value);
}

std::string get_field(const ScenarioConfig& cfg, const std::string& key) {
  const auto& t = fields();
  auto it = t.find(key);
  if (it == t.end()) {
    throw ConfigError(ErrorCode::kInvalidArgument, "unknown key: " + key,
                      {{key, "unknown key"}});
  }
  return it->second.get(cfg);
}

std::vector<std::string> field_names() {
  std::vector<std::string> out;
  for (const auto& [k, _] : fields()) out.push_back(k);
  return out;
}

ScenarioConfig load_scenario(const std::string& text) {
  ScenarioConfig cfg = default_scenario();
  std::istringstream in(text);
  std::string line;
  std::set<std::string> seen;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(ErrorCode::kParse,
                        "line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!seen.insert(key).second) {
      throw ConfigError(ErrorCode::kParse, "line " + std::to_string(lineno) +
                                               ": duplicate key " + key,
                        {{key, "duplicate key"}});
    }
    set_field(cfg, key, value);
  }
  auto violations = validate(cfg);
  if (!violations.empty()) {
    std::string msg = "invalid scenario:";
    for (const auto& v : violations) msg += " " + v.field + " (" + v.message + ");";
    throw ConfigError(ErrorCode::kConfig, msg, std::move(violations));
  }
  return cfg;
}

ScenarioConfig load_scenario_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorCode::kIo, "cannot open config file: " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return load_scenario(ss.str());
}

std::string to_text(const ScenarioConfig& cfg) {
  std::string out;
  for (const auto& [k, f] : fields()) out += k + " = " + f.get(cfg) + "\n";
  return out;
}

Rng make_stream(std::uint64_t seed, Stream stream, std::uint64_t a, std::uint64_t b) {
  auto lo = [](std::uint64_t x) { return static_cast<std::uint32_t>(x & 0xffffffffu); };
  auto hi = [](std::uint64_t x) { return static_cast<std::uint32_t>(x >> 32); };
  std::seed_seq seq{lo(seed), hi(seed), static_cast<std::uint32_t>(stream),
                    lo(a), hi(a), lo(b), hi(b)};
  return Rng(seq);
}

namespace {

// Unit horizontal axis of the corridor and its left normal.
std::pair<Vec2, Vec2> corridor_axes(const ScenarioConfig& cfg) {
  Vec2 axis = (cfg.destination_m - cfg.start_m).head<2>();
  const double len = axis.norm();
  axis = len > 0.0 ? Vec2(axis / len) : Vec2(1.0, 0.0);
  return {axis, Vec2(-axis.y(), axis.x())};
}

}  // namespace

double corridor_offset(const ScenarioConfig& cfg, const Vec3& p) {
  const auto [axis, normal] = corridor_axes(cfg);
  const Vec2 rel = p.head<2>() - cfg.start_m.head<2>();
  return std::abs(rel.dot(normal));
}

UserSet place_users(const ScenarioConfig& cfg, Rng& rng) {
  const auto [axis, normal] = corridor_axes(cfg);
  const double len = (cfg.destination_m - cfg.start_m).head<2>().norm();
  std::uniform_real_distribution<double> along(0.0, 1.0);
  std::uniform_real_distribution<double> across(-0.5, 0.5);
  std::uniform_real_distribution<double> height(cfg.user_height_min_m, cfg.user_height_max_m);
  UserSet users;
  users.positions.reserve(cfg.num_users);
  for (int n = 0; n < cfg.num_users; ++n) {
    const double s = along(rng) * len;
    const double o = across(rng) * cfg.corridor_width_m;
    const double z = height(rng);
    const Vec2 xy = cfg.start_m.head<2>() + s * axis + o * normal;
    users.positions.emplace_back(xy.x(), xy.y(), z);
  }
  return users;
}

}  // namespace uavmpc
