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

#include "uavmpc/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace uavmpc {

double distance(const Vec3& u, const Vec3& r) { return (u - r).norm(); }

double pathloss(double reference_gain, double exponent, double d) {
  if (!(d > 0.0)) throw DomainError("pathloss: distance must be positive");
  return reference_gain * std::pow(d, -exponent);
}

CVec steering_vector(int num_antennas, double cos_theta) {
  if (!(std::abs(cos_theta) <= 1.0)) {
    throw DomainError("steering_vector: |cos(theta)| must not exceed 1");
  }
  CVec a(num_antennas);
  for (int m = 0; m < num_antennas; ++m) {
    a(m) = std::polar(1.0, std::numbers::pi * m * cos_theta);
  }
  return a;
}

CVec draw_nlos(int num_antennas, Rng& rng) {
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  CVec g(num_antennas);
  for (int m = 0; m < num_antennas; ++m) {
    const double re = normal(rng);
    const double im = normal(rng);
    g(m) = Complex(re, im);
  }
  return g;
}

ChannelEntry synthesize_channel(const ScenarioConfig& cfg, const Vec3& u, const Vec3& r,
                                const CVec& nlos) {
  const int m = cfg.num_antennas;
  if (nlos.size() < m) throw DomainError("synthesize_channel: NLoS draw too short");
  ChannelEntry e;
  e.distance = distance(u, r);
  if (e.distance < cfg.distance_min_m) {
    throw DomainError("synthesize_channel: UAV-user distance below d_min");
  }
  e.beta = pathloss(cfg.reference_gain, cfg.pathloss_exponent, e.distance);
  e.cos_theta = std::clamp((u.x() - r.x()) / e.distance, -1.0, 1.0);
  e.nlos = nlos.head(m);
  const double k = cfg.rician_k_linear();
  double los_w = 0.0;
  double nlos_w = 0.0;
  if (std::isinf(k)) {
    los_w = 1.0;
  } else {
    los_w = std::sqrt(k / (k + 1.0));
    nlos_w = std::sqrt(1.0 / (k + 1.0));
  }
  e.hhat = los_w * steering_vector(m, e.cos_theta) + nlos_w * e.nlos;
  e.h = std::sqrt(e.beta) * e.hhat;
  return e;
}

ChannelEntry synthesize_channel(const ScenarioConfig& cfg, const Vec3& u, const Vec3& r,
                                Rng& rng) {
  return synthesize_channel(cfg, u, r, draw_nlos(cfg.num_antennas, rng));
}

NlosBank::NlosBank(std::uint64_t seed, int num_users, int num_antennas)
    : seed_(seed), num_users_(num_users), num_antennas_(num_antennas) {}

void NlosBank::ensure(int step) const {
  if (step < 0) throw DomainError("NlosBank: negative step");
  while (static_cast<int>(draws_.size()) <= step) {
    const int t = static_cast<int>(draws_.size());
    std::vector<CVec> row;
    row.reserve(num_users_);
    for (int n = 0; n < num_users_; ++n) {
      Rng rng = make_stream(seed_, Stream::kNlos, static_cast<std::uint64_t>(t),
                            static_cast<std::uint64_t>(n));
      row.push_back(draw_nlos(num_antennas_, rng));
    }
    draws_.push_back(std::move(row));
  }
}

const CVec& NlosBank::at(int step, int user) const {
  ensure(step);
  return draws_[step].at(user);
}

SlotChannels channels_at(const ScenarioConfig& cfg, const UserSet& users, const Vec3& r,
                         const NlosBank& bank, int step) {
  SlotChannels out;
  out.reserve(users.positions.size());
  for (int n = 0; n < users.size(); ++n) {
    out.push_back(synthesize_channel(cfg, users.positions[n], r, bank.at(step, n)));
  }
  return out;
}

double sinr(const std::vector<CVec>& h_all, const std::vector<CVec>& beams, int n,
            double noise_power) {
  const CVec& h = h_all.at(n);
  const double signal = std::norm(h.dot(beams.at(n)));
  double interference = noise_power;
  for (std::size_t k = 0; k < beams.size(); ++k) {
    if (static_cast<int>(k) == n) continue;
    interference += std::norm(h.dot(beams[k]));
  }
  return signal / interference;
}

std::vector<double> sinr_all(const SlotChannels& ch, const std::vector<CVec>& beams,
                             double noise_power) {
  std::vector<CVec> h;
  h.reserve(ch.size());
  for (const auto& e : ch) h.push_back(e.h);
  std::vector<double> out(ch.size());
  for (std::size_t n = 0; n < ch.size(); ++n) {
    out[n] = sinr(h, beams, static_cast<int>(n), noise_power);
  }
  return out;
}

}  // namespace uavmpc
