#pragma once

#include <cstdint>

#include "vlcfl/config.hpp"
#include "vlcfl/types.hpp"

namespace vlcfl {

/// Positions of the ceiling-mounted VLC APs: `n_aps` points on a ring of
/// radius ap_ring_fraction * cell_radius, starting at 45 degrees and evenly
/// spaced, at ap_drop_m above the receiver plane.
std::vector<Point3> vlc_ap_layout(const TopologyParams& params);

/// Builds a single-cell layout with the BS at the origin.
///
/// Exactly round(indoor_fraction * n_users) users are indoor; those take the
/// lowest ids. Each indoor user sits uniformly (over area) within
/// ap_coverage_radius_m of a uniformly chosen AP; outdoor users are uniform
/// over the cell disk. Per-user CPU cycles and frequencies are drawn
/// uniformly from the configured ranges. Same (params, seed), same topology.
Topology generate_topology(const TopologyParams& params, std::uint64_t seed);

}  // namespace vlcfl
