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

#include "uavmpc/uavmpc.h"

#include <cstdio>
#include <exception>
#include <memory>
#include <new>
#include <string>

#include <json.hpp>

#include "uavmpc/audit.hpp"
#include "uavmpc/baselines.hpp"
#include "uavmpc/experiments.hpp"
#include "uavmpc/mpc.hpp"
#include "uavmpc/scenario.hpp"
#include "uavmpc/trace_io.hpp"

struct uavmpc_config {
  uavmpc::ScenarioConfig cfg;
  std::string text;
};

struct uavmpc_result {
  std::string csv;
  std::string json;
};

namespace {

thread_local std::string g_last_error;

uavmpc_status fail(uavmpc_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

/// Runs `body`, translating exceptions into status codes.
template <typename F>
uavmpc_status guarded(F&& body) {
  try {
    g_last_error.clear();
    body();
    return UAVMPC_OK;
  } catch (const uavmpc::ConfigError& e) {
    std::string msg = e.what();
    for (const auto& v : e.violations()) msg += "; " + v.field + ": " + v.message;
    return fail(static_cast<uavmpc_status>(e.code()), msg);
  } catch (const uavmpc::Error& e) {
    return fail(static_cast<uavmpc_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(UAVMPC_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(UAVMPC_ERR_INTERNAL, e.what());
  }
}

uavmpc::UserSet users_for(const uavmpc::ScenarioConfig& cfg) {
  uavmpc::Rng rng = uavmpc::make_stream(cfg.rng_seed, uavmpc::Stream::kUsers);
  return uavmpc::place_users(cfg, rng);
}

uavmpc::MissionTrace mission(const uavmpc::ScenarioConfig& cfg, const std::string& scheme) {
  const uavmpc::UserSet users = users_for(cfg);
  if (scheme == "mpc") return uavmpc::run_mission(cfg, users);
  if (scheme == "offline-mpc") return uavmpc::run_offline_mpc(cfg, users);
  if (scheme == "offline-joint") return uavmpc::run_offline_joint(cfg, users);
  throw uavmpc::Error(uavmpc::ErrorCode::kInvalidArgument,
                      "unknown mission scheme '" + scheme + "'");
}

void fill_trace(const uavmpc::ScenarioConfig& cfg, const uavmpc::MissionTrace& trace,
                uavmpc_result& out) {
  out.csv = uavmpc::trace_to_csv(trace);
  auto j = nlohmann::ordered_json::parse(uavmpc::trace_summary_json(trace, cfg.rate_min_nats));
  const std::string audit = uavmpc::audit_trace(cfg, trace);
  j["constraint_check"] = audit.empty() ? "ok" : audit;
  j["replay_error_m"] = uavmpc::replay_error(cfg, trace);
  out.json = j.dump(2) + "\n";
}

void fill_table(const uavmpc::ResultTable& table, uavmpc_result& out) {
  out.csv = uavmpc::to_csv(table);
  out.json = uavmpc::to_json_summary(table);
}

/// set_field followed by validation; cfg is untouched on failure.
void assign(uavmpc::ScenarioConfig& cfg, const std::string& key, const std::string& value) {
  uavmpc::ScenarioConfig next = cfg;
  uavmpc::set_field(next, key, value);
  const auto bad = uavmpc::validate(next);
  if (!bad.empty()) {
    throw uavmpc::ConfigError(uavmpc::ErrorCode::kConfig, "invalid value for " + key, bad);
  }
  cfg = next;
}

template <typename T>
uavmpc_status require(const T* p, const char* what) {
  if (p == nullptr) return fail(UAVMPC_ERR_INVALID_ARGUMENT, std::string(what) + " is null");
  return UAVMPC_OK;
}

}  // namespace

extern "C" {

const char* uavmpc_version(void) { return "1.0.0"; }

const char* uavmpc_status_name(uavmpc_status status) {
  switch (status) {
    case UAVMPC_OK: return "ok";
    case UAVMPC_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case UAVMPC_ERR_PARSE: return "parse";
    case UAVMPC_ERR_CONFIG: return "config";
    case UAVMPC_ERR_IO: return "io";
    case UAVMPC_ERR_INFEASIBLE: return "infeasible";
    case UAVMPC_ERR_NUMERICAL: return "numerical";
    case UAVMPC_ERR_DOMAIN: return "domain";
    case UAVMPC_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* uavmpc_last_error(void) { return g_last_error.c_str(); }

uavmpc_status uavmpc_config_new(uavmpc_config** out) {
  if (auto s = require(out, "out")) return s;
  return guarded([&] { *out = new uavmpc_config{uavmpc::default_scenario(), {}}; });
}

uavmpc_status uavmpc_config_load_file(const char* path, uavmpc_config** out) {
  if (auto s = require(path, "path")) return s;
  if (auto s = require(out, "out")) return s;
  return guarded([&] { *out = new uavmpc_config{uavmpc::load_scenario_file(path), {}}; });
}

uavmpc_status uavmpc_config_set(uavmpc_config* cfg, const char* key, const char* value) {
  if (auto s = require(cfg, "cfg")) return s;
  if (auto s = require(key, "key")) return s;
  if (auto s = require(value, "value")) return s;
  return guarded([&] { assign(cfg->cfg, key, value); });
}

uavmpc_status uavmpc_config_set_seed(uavmpc_config* cfg, uint64_t seed) {
  if (auto s = require(cfg, "cfg")) return s;
  cfg->cfg.rng_seed = seed;
  g_last_error.clear();
  return UAVMPC_OK;
}

uavmpc_status uavmpc_config_set_disturbance(uavmpc_config* cfg, double meters) {
  if (auto s = require(cfg, "cfg")) return s;
  return guarded([&] {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", meters);
    assign(cfg->cfg, "disturbance_m", buf);
  });
}

const char* uavmpc_config_text(uavmpc_config* cfg) {
  if (cfg == nullptr) return "";
  cfg->text = uavmpc::to_text(cfg->cfg);
  return cfg->text.c_str();
}

void uavmpc_config_free(uavmpc_config* cfg) { delete cfg; }

uavmpc_status uavmpc_run(const uavmpc_config* cfg, const char* scheme, uavmpc_result** out) {
  if (auto s = require(cfg, "cfg")) return s;
  if (auto s = require(out, "out")) return s;
  const std::string name = scheme == nullptr ? "mpc" : scheme;
  return guarded([&] {
    auto res = std::make_unique<uavmpc_result>();
    fill_trace(cfg->cfg, mission(cfg->cfg, name), *res);
    *out = res.release();
  });
}

uavmpc_status uavmpc_baseline(const uavmpc_config* cfg, const char* scheme, uavmpc_result** out) {
  if (auto s = require(cfg, "cfg")) return s;
  if (auto s = require(scheme, "scheme")) return s;
  if (auto s = require(out, "out")) return s;
  return guarded([&] {
    const uavmpc::BaselineKind kind = uavmpc::parse_baseline(scheme);
    auto res = std::make_unique<uavmpc_result>();
    if (kind == uavmpc::BaselineKind::kOfflineMpc || kind == uavmpc::BaselineKind::kOfflineJoint) {
      fill_trace(cfg->cfg, mission(cfg->cfg, scheme), *res);
    } else {
      uavmpc::SweepSpec spec;
      spec.param = uavmpc::SweepParam::kRateMin;
      spec.grid = {cfg->cfg.rate_min_nats};
      spec.schemes = {scheme};
      spec.seeds = {cfg->cfg.rng_seed};
      spec.fixed_trajectory = true;
      spec.workers = 1;
      fill_table(uavmpc::run_sweep(spec, cfg->cfg), *res);
    }
    *out = res.release();
  });
}

uavmpc_status uavmpc_sweep(const uavmpc_config* cfg, const uavmpc_sweep_spec* spec,
                           uavmpc_result** out) {
  if (auto s = require(cfg, "cfg")) return s;
  if (auto s = require(spec, "spec")) return s;
  if (auto s = require(out, "out")) return s;
  if (spec->parameter == nullptr || spec->grid_len == 0 || spec->grid == nullptr ||
      spec->scheme_count == 0 || spec->schemes == nullptr || spec->seed_count == 0 ||
      spec->seeds == nullptr) {
    return fail(UAVMPC_ERR_INVALID_ARGUMENT,
                "sweep needs a parameter, a nonempty grid, schemes and seeds");
  }
  return guarded([&] {
    uavmpc::SweepSpec s;
    s.param = uavmpc::parse_sweep_param(spec->parameter);
    s.grid.assign(spec->grid, spec->grid + spec->grid_len);
    for (size_t i = 0; i < spec->scheme_count; ++i) {
      if (spec->schemes[i] == nullptr) {
        throw uavmpc::Error(uavmpc::ErrorCode::kInvalidArgument, "null scheme name");
      }
      s.schemes.emplace_back(spec->schemes[i]);
    }
    s.seeds.assign(spec->seeds, spec->seeds + spec->seed_count);
    s.fixed_trajectory = spec->fixed_trajectory != 0;
    s.workers = spec->workers;
    for (double v : s.grid) uavmpc::with_sweep_value(cfg->cfg, s.param, v);
    auto res = std::make_unique<uavmpc_result>();
    fill_table(uavmpc::run_sweep(s, cfg->cfg), *res);
    *out = res.release();
  });
}

uavmpc_status uavmpc_audit(const uavmpc_config* cfg, uavmpc_result** out) {
  if (auto s = require(cfg, "cfg")) return s;
  if (auto s = require(out, "out")) return s;
  return guarded([&] {
    const uavmpc::SurrogateAuditReport rep = uavmpc::run_surrogate_audit(cfg->cfg, cfg->cfg.rng_seed);
    auto res = std::make_unique<uavmpc_result>();
    res->csv = uavmpc::to_csv(rep);
    res->json = uavmpc::to_json(rep);
    *out = res.release();
  });
}

const char* uavmpc_result_csv(const uavmpc_result* result) {
  return result == nullptr ? "" : result->csv.c_str();
}

const char* uavmpc_result_json(const uavmpc_result* result) {
  return result == nullptr ? "" : result->json.c_str();
}

void uavmpc_result_free(uavmpc_result* result) { delete result; }

}  // extern "C"
