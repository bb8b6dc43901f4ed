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

#include <sstream>

#include <gtest/gtest.h>
#include <json.hpp>

#include "uavmpc/audit.hpp"
#include "uavmpc/trace_io.hpp"

namespace uavmpc {
namespace {

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  for (std::string f; std::getline(in, f, ',');) out.push_back(f);
  return out;
}

const MissionTrace& short_mission() {
  static const MissionTrace trace = [] {
    ScenarioConfig cfg;
    cfg.start_m = cfg.destination_m + Vec3(-40.0, -20.0, 10.0);
    Rng rng = make_stream(cfg.rng_seed, Stream::kUsers);
    return run_mission(cfg, place_users(cfg, rng));
  }();
  return trace;
}

TEST(TraceIoTest, CsvHasSchemaAndOneRowPerStep) {
  const MissionTrace& t = short_mission();
  ASSERT_FALSE(t.steps.empty());
  const auto rows = lines(trace_to_csv(t));
  ASSERT_EQ(rows.size(), t.steps.size() + 3);
  EXPECT_EQ(rows[0], "# schema_version=1");
  EXPECT_EQ(rows[1], "# scheme=" + t.scheme);
  const auto header = split(rows[2]);
  EXPECT_EQ(header.size(), 23u + 2u * 3u);
  EXPECT_EQ(header.front(), "step");
  EXPECT_EQ(header[22], "min_rate");
  EXPECT_EQ(header.back(), "sinr_2");
  for (std::size_t i = 0; i < t.steps.size(); ++i) {
    const auto f = split(rows[i + 3]);
    ASSERT_EQ(f.size(), header.size());
    EXPECT_EQ(std::stoi(f[0]), t.steps[i].step);
    EXPECT_EQ(std::stod(f[1]), t.steps[i].position.x());
    EXPECT_EQ(std::stod(f[15]), t.steps[i].total_power_w);
    EXPECT_EQ(std::stod(f[23]), t.steps[i].rate[0]);
  }
}

TEST(TraceIoTest, SummaryFields) {
  const MissionTrace& t = short_mission();
  const auto j = nlohmann::json::parse(trace_summary_json(t, 0.1));
  EXPECT_EQ(j["schema_version"], 1);
  EXPECT_EQ(j["steps"], t.steps.size());
  EXPECT_EQ(j["terminal_distance_m"].get<double>(), t.terminal_distance);
  EXPECT_EQ(j["energy_j"].get<double>(), t.energy_j);
  EXPECT_EQ(j["mean_user_rates"].size(), 3u);
  double sum = 0.0;
  for (const auto& r : j["mean_user_rates"]) sum += r.get<double>();
  EXPECT_NEAR(j["mean_sum_rate"].get<double>(), sum, 1e-12 * sum);
  EXPECT_GE(j["qos_pct"].get<double>(), 0.0);
  EXPECT_LE(j["qos_pct"].get<double>(), 100.0);
}

TEST(TraceIoTest, EmptyTrace) {
  MissionTrace t;
  t.scheme = "mpc";
  EXPECT_EQ(lines(trace_to_csv(t)).size(), 3u);
  const auto j = nlohmann::json::parse(trace_summary_json(t, 0.1));
  EXPECT_EQ(j["steps"], 0);
  EXPECT_EQ(j["qos_pct"], 0.0);
}

TEST(AuditIoTest, SmallAuditSerializes) {
  AuditOptions opt;
  opt.points = 5;
  opt.candidates_per_point = 10;
  opt.concavity_draws = 3;
  const SurrogateAuditReport r = run_surrogate_audit(ScenarioConfig{}, 4, opt);
  EXPECT_EQ(r.seed, 4u);
  EXPECT_EQ(r.propulsion.samples, 50);
  EXPECT_EQ(r.propulsion.violations, 0);
  EXPECT_EQ(r.bf_shannon.violations, 0);
  EXPECT_EQ(r.concavity_draws, 3);
  EXPECT_LT(r.concavity_max, 0.0);

  const auto j = nlohmann::json::parse(to_json(r));
  EXPECT_EQ(j["seed"], 4);
  EXPECT_EQ(j["propulsion"]["samples"], 50);
  const auto rows = lines(to_csv(r));
  ASSERT_EQ(rows.size(), 9u);
  EXPECT_EQ(rows[0], "# schema_version=1");
  EXPECT_EQ(rows[1], "# seed=4");
  EXPECT_EQ(rows[2], "family,samples,violations,skipped,max_violation,max_gap_at_point");
  EXPECT_EQ(split(rows[8])[0], "concavity");
  EXPECT_EQ(split(rows[8])[1], "3");
  EXPECT_EQ(split(rows[8])[2], "0");

  const SurrogateAuditReport again = run_surrogate_audit(ScenarioConfig{}, 4, opt);
  EXPECT_EQ(to_json(again), to_json(r));
}

}  // namespace
}  // namespace uavmpc
