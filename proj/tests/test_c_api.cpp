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

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <string>

#include <gtest/gtest.h>
#include <json.hpp>

#include "uavmpc/uavmpc.h"

namespace {

struct ConfigGuard {
  uavmpc_config* cfg = nullptr;
  ~ConfigGuard() { uavmpc_config_free(cfg); }
};

struct ResultGuard {
  uavmpc_result* res = nullptr;
  ~ResultGuard() { uavmpc_result_free(res); }
};

TEST(CApiTest, VersionAndStatusNames) {
  EXPECT_GT(std::strlen(uavmpc_version()), 0u);
  EXPECT_STREQ(uavmpc_status_name(UAVMPC_OK), "ok");
  EXPECT_STREQ(uavmpc_status_name(UAVMPC_ERR_CONFIG), "config");
  EXPECT_STREQ(uavmpc_status_name(UAVMPC_ERR_DOMAIN), "domain");
  EXPECT_STRNE(uavmpc_status_name(static_cast<uavmpc_status>(99)), "ok");
}

TEST(CApiTest, NullArgumentsAreRejected) {
  EXPECT_EQ(uavmpc_config_new(nullptr), UAVMPC_ERR_INVALID_ARGUMENT);
  EXPECT_GT(std::strlen(uavmpc_last_error()), 0u);
  EXPECT_EQ(uavmpc_config_set(nullptr, "num_users", "2"), UAVMPC_ERR_INVALID_ARGUMENT);
  uavmpc_result* res = nullptr;
  EXPECT_EQ(uavmpc_run(nullptr, "mpc", &res), UAVMPC_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(res, nullptr);
  EXPECT_EQ(uavmpc_audit(nullptr, &res), UAVMPC_ERR_INVALID_ARGUMENT);
  EXPECT_STREQ(uavmpc_result_csv(nullptr), "");
  uavmpc_config_free(nullptr);
  uavmpc_result_free(nullptr);
}

TEST(CApiTest, ConfigAssignments) {
  ConfigGuard g;
  ASSERT_EQ(uavmpc_config_new(&g.cfg), UAVMPC_OK);
  EXPECT_STREQ(uavmpc_last_error(), "");
  EXPECT_EQ(uavmpc_config_set(g.cfg, "num_users", "2"), UAVMPC_OK);
  EXPECT_NE(std::strstr(uavmpc_config_text(g.cfg), "num_users = 2"), nullptr);

  EXPECT_EQ(uavmpc_config_set(g.cfg, "error_probability", "0.7"), UAVMPC_ERR_CONFIG);
  EXPECT_NE(std::strstr(uavmpc_last_error(), "error_probability"), nullptr);
  EXPECT_EQ(std::strstr(uavmpc_config_text(g.cfg), "error_probability = 0.7"), nullptr);

  EXPECT_EQ(uavmpc_config_set(g.cfg, "num_users", "two"), UAVMPC_ERR_PARSE);
  EXPECT_EQ(uavmpc_config_set(g.cfg, "no_such_key", "1"), UAVMPC_ERR_PARSE);
  EXPECT_EQ(uavmpc_config_set_disturbance(g.cfg, -1.0), UAVMPC_ERR_CONFIG);
  EXPECT_NE(std::strstr(uavmpc_last_error(), "disturbance_m"), nullptr);
  EXPECT_EQ(uavmpc_config_set_disturbance(g.cfg, 2.5), UAVMPC_OK);
  EXPECT_EQ(uavmpc_config_set_seed(g.cfg, 42), UAVMPC_OK);
  EXPECT_NE(std::strstr(uavmpc_config_text(g.cfg), "rng_seed = 42"), nullptr);
}

TEST(CApiTest, LoadFileRoundTrip) {
  ConfigGuard a, b;
  ASSERT_EQ(uavmpc_config_new(&a.cfg), UAVMPC_OK);
  ASSERT_EQ(uavmpc_config_set(a.cfg, "comm_power_max_w", "0.5"), UAVMPC_OK);
  const std::string path = testing::TempDir() + "uavmpc_c_api.cfg";
  std::ofstream(path) << uavmpc_config_text(a.cfg);
  ASSERT_EQ(uavmpc_config_load_file(path.c_str(), &b.cfg), UAVMPC_OK);
  EXPECT_STREQ(uavmpc_config_text(a.cfg), uavmpc_config_text(b.cfg));
  std::remove(path.c_str());
  uavmpc_config* missing = nullptr;
  EXPECT_EQ(uavmpc_config_load_file("/nonexistent/uavmpc.cfg", &missing), UAVMPC_ERR_IO);
  EXPECT_EQ(missing, nullptr);
}

TEST(CApiTest, ShortMission) {
  ConfigGuard g;
  ASSERT_EQ(uavmpc_config_new(&g.cfg), UAVMPC_OK);
  ASSERT_EQ(uavmpc_config_set(g.cfg, "start_x_m", "960"), UAVMPC_OK);
  ASSERT_EQ(uavmpc_config_set(g.cfg, "start_y_m", "180"), UAVMPC_OK);
  ASSERT_EQ(uavmpc_config_set(g.cfg, "start_z_m", "310"), UAVMPC_OK);
  ResultGuard r;
  ASSERT_EQ(uavmpc_run(g.cfg, "mpc", &r.res), UAVMPC_OK) << uavmpc_last_error();
  const auto j = nlohmann::json::parse(uavmpc_result_json(r.res));
  EXPECT_EQ(j["constraint_check"], "ok");
  EXPECT_EQ(j["replay_error_m"].get<double>(), 0.0);
  EXPECT_LE(j["terminal_distance_m"].get<double>(), 5.0);
  EXPECT_EQ(std::strncmp(uavmpc_result_csv(r.res), "# schema_version=1", 18), 0);

  ResultGuard bad;
  EXPECT_EQ(uavmpc_run(g.cfg, "bf-zf", &bad.res), UAVMPC_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(bad.res, nullptr);
}

TEST(CApiTest, AuditThroughApi) {
  ConfigGuard g;
  ASSERT_EQ(uavmpc_config_new(&g.cfg), UAVMPC_OK);
  ASSERT_EQ(uavmpc_config_set_seed(g.cfg, 3), UAVMPC_OK);
  ResultGuard r;
  ASSERT_EQ(uavmpc_audit(g.cfg, &r.res), UAVMPC_OK) << uavmpc_last_error();
  const auto j = nlohmann::json::parse(uavmpc_result_json(r.res));
  EXPECT_EQ(j["seed"], 3);
  EXPECT_EQ(j["bf_shannon"]["violations"], 0);
  EXPECT_EQ(j["propulsion"]["samples"], 10000);
}

TEST(CApiTest, SweepValidation) {
  ConfigGuard g;
  ASSERT_EQ(uavmpc_config_new(&g.cfg), UAVMPC_OK);
  const double grid[] = {0.5};
  const char* schemes[] = {"bf-mrt"};
  const uint64_t seeds[] = {1};
  uavmpc_sweep_spec spec{"rate_min_nats", grid, 1, schemes, 1, seeds, 1, 1, 1};
  ResultGuard r;
  ASSERT_EQ(uavmpc_sweep(g.cfg, &spec, &r.res), UAVMPC_OK) << uavmpc_last_error();
  EXPECT_NE(std::strstr(uavmpc_result_csv(r.res), "# parameter=rate_min_nats"), nullptr);

  spec.parameter = "wind_speed";
  ResultGuard bad;
  EXPECT_EQ(uavmpc_sweep(g.cfg, &spec, &bad.res), UAVMPC_ERR_INVALID_ARGUMENT);
  spec.parameter = "rate_min_nats";
  spec.grid_len = 0;
  EXPECT_EQ(uavmpc_sweep(g.cfg, &spec, &bad.res), UAVMPC_ERR_INVALID_ARGUMENT);
}

}  // namespace
