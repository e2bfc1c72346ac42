#pragma once

#include <cstddef>
#include <vector>

#include "vlcfl/config.hpp"
#include "vlcfl/cost.hpp"
#include "vlcfl/types.hpp"

namespace vlcfl {

// Width of one resource block on each link. Uplink and downlink RF blocks
// are always equal; in RF-only mode the VLC width is zero.
struct BandwidthAllocation {
  double b_up = 0.0;
  double b_down = 0.0;
  double b_vlc = 0.0;

  friend bool operator==(const BandwidthAllocation&, const BandwidthAllocation&) = default;
};

// Selected users by id, each list sorted ascending.
struct Selection {
  std::vector<UserId> indoor;
  std::vector<UserId> outdoor;

  std::size_t size() const noexcept { return indoor.size() + outdoor.size(); }
  bool empty() const noexcept { return indoor.empty() && outdoor.empty(); }
  std::vector<UserId> all() const;  // sorted union
  bool contains(UserId id) const;

  friend bool operator==(const Selection&, const Selection&) = default;
};

bool is_subset(const Selection& a, const Selection& b);

struct UsbaResult {
  Selection selection;
  BandwidthAllocation bandwidth;
  std::size_t iterations = 0;
  bool converged = false;
  std::size_t objective = 0;  // total selected samples
};

/// Link rates a user would see at the given RB widths. Indoor users in hybrid
/// mode download over VLC; everything else rides RF.
LinkRates link_rates(const UserNode& user, const BandwidthAllocation& bw, const Topology& topology,
                     const SimConfig& config, LinkMode mode);

/// Round-time and energy check for one user. Zero-rate links are infeasible.
bool is_feasible(const UserNode& user, const BandwidthAllocation& bw, const Topology& topology,
                 const SimConfig& config, LinkMode mode = LinkMode::Hybrid);

/// Selection step: every user that is feasible at `bw`.
Selection get_s(const BandwidthAllocation& bw, const Topology& topology, const SimConfig& config,
                LinkMode mode = LinkMode::Hybrid);

/// Bandwidth step: saturate both budgets with equal-width RBs.
/// Hybrid: B_up = B_down = B_R / (|S| + |S_out|), B_vlc = B_V / |S_in| (B_V if no indoor user).
/// RF-only: B_up = B_down = B_R / (2 |S|).
/// Throws EmptySelection for an empty selection.
BandwidthAllocation get_b(const Selection& selection, const SimConfig& config,
                          LinkMode mode = LinkMode::Hybrid);

std::size_t selection_objective(const Selection& selection, const Topology& topology);

/// Starting RB widths for the alternation (config override or the
/// as-if-everyone-selected allocation).
BandwidthAllocation initial_bandwidth(const Topology& topology, const SimConfig& config,
                                      LinkMode mode);

/// Widest RBs a single selected user could get; used to restart the
/// alternation when a selection step comes back empty.
BandwidthAllocation solo_bandwidth(const SimConfig& config, LinkMode mode);

/// Alternating selection/allocation until the pair stops changing.
///
/// On a revisited (selection, allocation) state or when max_iterations runs
/// out, the result is the best visited selection whose members are all
/// feasible under its own allocation, with converged = false. An empty
/// selection step restarts from solo_bandwidth.
UsbaResult usba(const Topology& topology, const SimConfig& config, LinkMode mode = LinkMode::Hybrid);

/// The same alternation with VLC disabled.
UsbaResult run_rf_only(const Topology& topology, const SimConfig& config);

/// Exhaustive search over selection sizes (n_in, n_out). Allocation depends
/// only on the sizes, so each pair fixes the RB widths; a pair is consistent
/// when at least that many users of each kind are feasible there. Users are
/// filled by (shard size desc, id asc). Throws InvalidArgument above
/// config.usba.oracle_max_users.
UsbaResult oracle_enumerate(const Topology& topology, const SimConfig& config,
                            LinkMode mode = LinkMode::Hybrid);

}  // namespace vlcfl
