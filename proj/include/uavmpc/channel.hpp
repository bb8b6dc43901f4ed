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
#include <vector>

#include "uavmpc/common.hpp"
#include "uavmpc/scenario.hpp"

namespace uavmpc {

/// Position and velocity of the UAV at one time step.
struct UavState {
  Vec3 position = Vec3::Zero();
  Vec3 velocity = Vec3::Zero();
};

/// One user's channel at one time step: h = sqrt(beta) * hhat.
struct ChannelEntry {
  CVec h;
  CVec hhat;
  CVec nlos;
  double beta = 0.0;
  double cos_theta = 0.0;
  double distance = 0.0;
};

/// Channels of all users at one time step.
using SlotChannels = std::vector<ChannelEntry>;

double distance(const Vec3& u, const Vec3& r);

/// B0 * d^(-exponent); throws DomainError for d <= 0.
double pathloss(double reference_gain, double exponent, double d);

/// Half-wavelength ULA response along the x axis.
CVec steering_vector(int num_antennas, double cos_theta);

/// Rician channel of a user at u seen from a UAV at r, given the frozen
/// NLoS draw. Throws DomainError when the link is shorter than d_min.
ChannelEntry synthesize_channel(const ScenarioConfig& cfg, const Vec3& u, const Vec3& r,
                                const CVec& nlos);

/// Draws g ~ CN(0, I_M) from the stream, one entry at a time.
CVec draw_nlos(int num_antennas, Rng& rng);

/// Convenience overload that draws the NLoS part from rng.
ChannelEntry synthesize_channel(const ScenarioConfig& cfg, const Vec3& u, const Vec3& r,
                                Rng& rng);

/// Frozen NLoS draws indexed by (absolute time step, user). Each draw comes
/// from its own seeded stream, so the first M entries are identical for any
/// array size >= M and for any order of access.
class NlosBank {
 public:
  NlosBank(std::uint64_t seed, int num_users, int num_antennas);

  const CVec& at(int step, int user) const;
  int num_antennas() const { return num_antennas_; }

 private:
  void ensure(int step) const;

  std::uint64_t seed_;
  int num_users_;
  int num_antennas_;
  mutable std::vector<std::vector<CVec>> draws_;
};

/// Channels for every user with the UAV at r and NLoS draws of step t.
SlotChannels channels_at(const ScenarioConfig& cfg, const UserSet& users, const Vec3& r,
                         const NlosBank& bank, int step);

/// |h_n^H w_n|^2 / (sum_{k != n} |h_n^H w_k|^2 + noise).
double sinr(const std::vector<CVec>& h_all, const std::vector<CVec>& beams, int n,
            double noise_power);

std::vector<double> sinr_all(const SlotChannels& ch, const std::vector<CVec>& beams,
                             double noise_power);

}  // namespace uavmpc
