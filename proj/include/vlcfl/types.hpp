#pragma once

#include <cstddef>
#include <vector>

namespace vlcfl {

struct Point3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend bool operator==(const Point3&, const Point3&) = default;
};

/// Euclidean distance in meters.
double distance(const Point3& a, const Point3& b) noexcept;

/// Horizontal (x, y) distance, ignoring height.
double horizontal_distance(const Point3& a, const Point3& b) noexcept;

using UserId = int;

struct UserNode {
  UserId id = 0;
  Point3 position;
  bool indoor = false;
  std::size_t shard_size = 1;          // D_n, samples
  double cycles_per_sample = 0.0;      // c_n
  double cpu_freq_hz = 0.0;            // f_n
  double capacitance_coeff = 0.0;      // alpha_n, enters the energy as alpha_n / 2
  double tx_power_w = 0.0;             // P_n
  double energy_budget_j = 0.0;        // gamma_nE

  friend bool operator==(const UserNode&, const UserNode&) = default;
};

struct Topology {
  double cell_radius_m = 0.0;
  Point3 bs_position;  // z unused
  std::vector<Point3> vlc_aps;
  std::vector<UserNode> users;
  std::size_t n_indoor = 0;
  std::size_t n_outdoor = 0;

  const UserNode& user(UserId id) const { return users.at(static_cast<std::size_t>(id)); }

  friend bool operator==(const Topology&, const Topology&) = default;
};

}  // namespace vlcfl
