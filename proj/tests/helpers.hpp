#pragma once

#include <cmath>
#include <vector>

#include "vlcfl/config.hpp"
#include "vlcfl/types.hpp"

namespace testing {

inline vlcfl::UserNode make_user(int id, vlcfl::Point3 pos, bool indoor) {
  vlcfl::UserNode u;
  u.id = id;
  u.position = pos;
  u.indoor = indoor;
  u.shard_size = 9;
  u.cycles_per_sample = 2e4;
  u.cpu_freq_hz = 1e9;
  u.capacitance_coeff = 2e-28;
  u.tx_power_w = 0.1;
  u.energy_budget_j = 2.0;
  return u;
}

// Users must be pushed in id order starting at 0.
inline vlcfl::Topology make_topology(std::vector<vlcfl::UserNode> users,
                                     std::vector<vlcfl::Point3> aps = {{0.0, 0.0, 3.35}}) {
  vlcfl::Topology t;
  t.cell_radius_m = 50.0;
  t.vlc_aps = std::move(aps);
  for (const auto& u : users) (u.indoor ? t.n_indoor : t.n_outdoor) += 1;
  t.users = std::move(users);
  return t;
}

inline bool rel_close(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

}  // namespace testing
