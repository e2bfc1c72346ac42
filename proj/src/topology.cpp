#include "vlcfl/topology.hpp"

#include <cmath>
#include <numbers>

#include "vlcfl/error.hpp"
#include "vlcfl/random.hpp"

namespace vlcfl {
namespace {

// Uniform over the area of a disk: radius goes as sqrt(u).
std::pair<double, double> sample_disk(Rng& rng, double radius) {
  const double r = radius * std::sqrt(rng.uniform());
  const double phi = 2.0 * std::numbers::pi * rng.uniform();
  return {r * std::cos(phi), r * std::sin(phi)};
}

}  // namespace

double distance(const Point3& a, const Point3& b) noexcept {
  return std::hypot(a.x - b.x, a.y - b.y, a.z - b.z);
}

double horizontal_distance(const Point3& a, const Point3& b) noexcept {
  return std::hypot(a.x - b.x, a.y - b.y);
}

std::vector<Point3> vlc_ap_layout(const TopologyParams& params) {
  std::vector<Point3> aps;
  aps.reserve(params.n_aps);
  const double ring = params.ap_ring_fraction * params.cell_radius_m;
  const double height = params.receiver_height_m + params.ap_drop_m;
  for (std::size_t k = 0; k < params.n_aps; ++k) {
    const double angle =
        std::numbers::pi / 4.0 + 2.0 * std::numbers::pi * static_cast<double>(k) /
                                     static_cast<double>(params.n_aps);
    aps.push_back({ring * std::cos(angle), ring * std::sin(angle), height});
  }
  return aps;
}

Topology generate_topology(const TopologyParams& params, std::uint64_t seed) {
  if (params.n_users == 0) throw InvalidArgument("n_users must be at least 1");
  if (!(params.indoor_fraction >= 0.0 && params.indoor_fraction <= 1.0)) {
    throw InvalidArgument("indoor_fraction must lie in [0, 1]");
  }
  if (!(params.cell_radius_m > 0.0)) throw InvalidArgument("cell_radius_m must be positive");
  if (params.n_aps == 0 && params.indoor_fraction > 0.0) {
    throw InvalidArgument("indoor users need at least one VLC AP");
  }

  Topology topo;
  topo.cell_radius_m = params.cell_radius_m;
  topo.vlc_aps = vlc_ap_layout(params);
  topo.n_indoor = static_cast<std::size_t>(
      std::llround(params.indoor_fraction * static_cast<double>(params.n_users)));
  topo.n_outdoor = params.n_users - topo.n_indoor;

  Rng rng(seed);
  topo.users.reserve(params.n_users);
  for (std::size_t i = 0; i < params.n_users; ++i) {
    UserNode u;
    u.id = static_cast<UserId>(i);
    u.indoor = i < topo.n_indoor;
    if (u.indoor) {
      const Point3& ap = topo.vlc_aps[rng.index(topo.vlc_aps.size())];
      const auto [dx, dy] = sample_disk(rng, params.ap_coverage_radius_m);
      u.position = {ap.x + dx, ap.y + dy, params.receiver_height_m};
    } else {
      const auto [x, y] = sample_disk(rng, params.cell_radius_m);
      u.position = {x, y, params.receiver_height_m};
    }
    u.shard_size = params.shard_size;
    u.cycles_per_sample = rng.uniform(params.cycles_min, params.cycles_max);
    u.cpu_freq_hz = rng.uniform(params.cpu_freq_min_hz, params.cpu_freq_max_hz);
    u.capacitance_coeff = params.capacitance_coeff;
    u.tx_power_w = params.tx_power_w;
    u.energy_budget_j = params.energy_budget_j;
    topo.users.push_back(u);
  }
  return topo;
}

}  // namespace vlcfl
