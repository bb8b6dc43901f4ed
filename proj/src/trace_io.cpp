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

#include "uavmpc/trace_io.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "uavmpc/baselines.hpp"

namespace uavmpc {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string trace_to_csv(const MissionTrace& trace) {
  const std::size_t users = trace.steps.empty() ? 0 : trace.steps.front().rate.size();
  std::ostringstream out;
  out << "# schema_version=" << kTraceSchemaVersion << "\n";
  out << "# scheme=" << trace.scheme << "\n";
  out << "step,x,y,z,vx,vy,vz,dx,dy,dz,next_x,next_y,next_z,propulsion_w,comm_w,total_w,"
         "objective,ao_iterations,ao_stop,fallback,rate_floor_met,sum_rate,min_rate";
  for (std::size_t n = 0; n < users; ++n) out << ",rate_" << n;
  for (std::size_t n = 0; n < users; ++n) out << ",sinr_" << n;
  out << "\n";
  for (const StepRecord& s : trace.steps) {
    out << s.step;
    for (const Vec3* v : {&s.position, &s.velocity, &s.disturbance, &s.next_position}) {
      for (int i = 0; i < 3; ++i) out << ',' << num((*v)[i]);
    }
    double sum = 0.0;
    for (double r : s.rate) sum += r;
    const double min_rate = s.rate.empty() ? 0.0 : *std::min_element(s.rate.begin(), s.rate.end());
    out << ',' << num(s.propulsion_power_w) << ',' << num(s.comm_power_w) << ','
        << num(s.total_power_w) << ',' << num(s.objective) << ',' << s.ao_iterations << ','
        << (s.ao_stop.empty() ? "none" : s.ao_stop) << ',' << (s.fallback ? 1 : 0) << ','
        << (s.rate_floor_met ? 1 : 0) << ',' << num(sum) << ',' << num(min_rate);
    for (std::size_t n = 0; n < users; ++n) out << ',' << num(n < s.rate.size() ? s.rate[n] : 0.0);
    for (std::size_t n = 0; n < users; ++n) out << ',' << num(n < s.sinr.size() ? s.sinr[n] : 0.0);
    out << "\n";
  }
  return out.str();
}

std::string trace_summary_json(const MissionTrace& trace, double rate_min) {
  nlohmann::ordered_json j;
  j["schema_version"] = kTraceSchemaVersion;
  j["scheme"] = trace.scheme;
  j["termination"] = trace.termination;
  j["steps"] = trace.steps.size();
  j["final_position"] = {trace.final_position.x(), trace.final_position.y(),
                         trace.final_position.z()};
  j["terminal_distance_m"] = trace.terminal_distance;
  j["energy_j"] = trace.energy_j;

  const std::size_t users = trace.steps.empty() ? 0 : trace.steps.front().rate.size();
  std::vector<double> user_mean(users, 0.0);
  double sum = 0.0, mins = 0.0;
  int fallbacks = 0;
  for (const StepRecord& s : trace.steps) {
    for (std::size_t n = 0; n < users && n < s.rate.size(); ++n) {
      user_mean[n] += s.rate[n];
      sum += s.rate[n];
    }
    if (!s.rate.empty()) mins += *std::min_element(s.rate.begin(), s.rate.end());
    if (s.fallback) ++fallbacks;
  }
  const double steps = std::max<double>(1.0, static_cast<double>(trace.steps.size()));
  for (double& m : user_mean) m /= steps;
  j["mean_sum_rate"] = sum / steps;
  j["mean_min_rate"] = mins / steps;
  j["mean_user_rates"] = user_mean;
  j["rate_min"] = rate_min;
  j["qos_pct"] = trace.steps.empty() ? 0.0 : qos_satisfaction(trace, rate_min);
  j["fallback_steps"] = fallbacks;
  return j.dump(2) + "\n";
}

}  // namespace uavmpc
