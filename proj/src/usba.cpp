#include "vlcfl/usba.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>

#include "vlcfl/channel.hpp"
#include "vlcfl/error.hpp"

namespace vlcfl {
namespace {

BandwidthAllocation allocation_for_counts(std::size_t n_in, std::size_t n_out,
                                          const SimConfig& config, LinkMode mode) {
  const double br = config.rf.total_bandwidth_hz;
  if (mode == LinkMode::RfOnly) {
    const double b = br / static_cast<double>(2 * (n_in + n_out));
    return {b, b, 0.0};
  }
  const double b = br / static_cast<double>(n_in + 2 * n_out);
  const double bv = n_in == 0 ? config.vlc.total_bandwidth_hz
                              : config.vlc.total_bandwidth_hz / static_cast<double>(n_in);
  return {b, b, bv};
}

// Largest shards first, ties by id.
std::vector<UserId> best_k(std::vector<UserId> ids, std::size_t k, const Topology& topology) {
  std::stable_sort(ids.begin(), ids.end(), [&](UserId a, UserId b) {
    const auto da = topology.user(a).shard_size;
    const auto db = topology.user(b).shard_size;
    return da != db ? da > db : a < b;
  });
  ids.resize(k);
  std::sort(ids.begin(), ids.end());
  return ids;
}

}  // namespace

std::vector<UserId> Selection::all() const {
  std::vector<UserId> out;
  out.reserve(size());
  std::merge(indoor.begin(), indoor.end(), outdoor.begin(), outdoor.end(), std::back_inserter(out));
  return out;
}

bool Selection::contains(UserId id) const {
  return std::binary_search(indoor.begin(), indoor.end(), id) ||
         std::binary_search(outdoor.begin(), outdoor.end(), id);
}

bool is_subset(const Selection& a, const Selection& b) {
  return std::includes(b.indoor.begin(), b.indoor.end(), a.indoor.begin(), a.indoor.end()) &&
         std::includes(b.outdoor.begin(), b.outdoor.end(), a.outdoor.begin(), a.outdoor.end());
}

LinkRates link_rates(const UserNode& user, const BandwidthAllocation& bw, const Topology& topology,
                     const SimConfig& config, LinkMode mode) {
  const auto& rf = config.rf;
  const double d = std::max(horizontal_distance(user.position, topology.bs_position), rf.min_distance_m);
  const double h = rf_channel_gain(d, user.indoor, rf);

  LinkRates rates;
  rates.uplink_bps = rf_rate(user.tx_power_w, h, rf.uplink_interference_w, bw.b_up, rf.noise_psd);
  if (mode == LinkMode::Hybrid && user.indoor) {
    rates.downlink = Downlink::Vlc;
    rates.downlink_bps = vlc_rate(vlc_sinr(user, topology, bw.b_vlc, config.vlc), bw.b_vlc);
  } else {
    rates.downlink = Downlink::Rf;
    rates.downlink_bps =
        rf_rate(rf.bs_power_w, h, rf.downlink_interference_w, bw.b_down, rf.noise_psd);
  }
  return rates;
}

bool is_feasible(const UserNode& user, const BandwidthAllocation& bw, const Topology& topology,
                 const SimConfig& config, LinkMode mode) {
  CostBreakdown cost;
  try {
    cost = cost_breakdown(user, link_rates(user, bw, topology, config, mode), config);
  } catch (const InfeasibleLink&) {
    return false;
  }
  const double t = cost.round_time();
  const double e = cost.energy();
  return std::isfinite(t) && std::isfinite(e) && t <= config.system.t_round_s &&
         e <= user.energy_budget_j;
}

Selection get_s(const BandwidthAllocation& bw, const Topology& topology, const SimConfig& config,
                LinkMode mode) {
  Selection s;
  for (const auto& u : topology.users) {
    if (!is_feasible(u, bw, topology, config, mode)) continue;
    (u.indoor ? s.indoor : s.outdoor).push_back(u.id);
  }
  return s;
}

BandwidthAllocation get_b(const Selection& selection, const SimConfig& config, LinkMode mode) {
  if (selection.empty()) throw EmptySelection("cannot allocate bandwidth to an empty selection");
  return allocation_for_counts(selection.indoor.size(), selection.outdoor.size(), config, mode);
}

std::size_t selection_objective(const Selection& selection, const Topology& topology) {
  std::size_t total = 0;
  for (auto id : selection.indoor) total += topology.user(id).shard_size;
  for (auto id : selection.outdoor) total += topology.user(id).shard_size;
  return total;
}

BandwidthAllocation initial_bandwidth(const Topology& topology, const SimConfig& config,
                                      LinkMode mode) {
  auto bw = allocation_for_counts(topology.n_indoor, topology.n_outdoor, config, mode);
  if (config.usba.initial_rf_rb_hz > 0.0) bw.b_up = bw.b_down = config.usba.initial_rf_rb_hz;
  if (mode == LinkMode::Hybrid && config.usba.initial_vlc_rb_hz > 0.0) {
    bw.b_vlc = config.usba.initial_vlc_rb_hz;
  }
  return bw;
}

BandwidthAllocation solo_bandwidth(const SimConfig& config, LinkMode mode) {
  const double br = config.rf.total_bandwidth_hz;
  if (mode == LinkMode::RfOnly) return {br / 2.0, br / 2.0, 0.0};
  return {br, br, config.vlc.total_bandwidth_hz};
}

UsbaResult usba(const Topology& topology, const SimConfig& config, LinkMode mode) {
  UsbaResult result;
  if (topology.users.empty()) {
    result.converged = true;
    return result;
  }

  BandwidthAllocation previous = initial_bandwidth(topology, config, mode);
  Selection current = get_s(previous, topology, config, mode);
  if (current.empty()) {
    previous = solo_bandwidth(config, mode);
    current = get_s(previous, topology, config, mode);
    if (current.empty()) {
      // Nobody fits even with the whole band to themselves.
      result.converged = true;
      return result;
    }
  }

  // Each state is a selection together with the allocation that produced it.
  std::vector<std::pair<Selection, BandwidthAllocation>> visited{{current, previous}};
  std::size_t iteration = 0;
  while (iteration < config.usba.max_iterations) {
    ++iteration;
    BandwidthAllocation bw = get_b(current, config, mode);
    Selection next = get_s(bw, topology, config, mode);

    if (next == current && bw == previous) {
      result.objective = selection_objective(current, topology);
      result.selection = std::move(current);
      result.bandwidth = bw;
      result.iterations = iteration;
      result.converged = true;
      return result;
    }
    if (next.empty()) {
      bw = solo_bandwidth(config, mode);
      next = get_s(bw, topology, config, mode);
    }
    const auto state = std::make_pair(next, bw);
    if (std::find(visited.begin(), visited.end(), state) != visited.end()) break;  // cycle
    visited.push_back(state);
    previous = bw;
    current = std::move(next);
  }

  result.iterations = iteration;
  result.converged = false;
  for (const auto& state : visited) {
    const Selection& candidate = state.first;
    if (candidate.empty()) continue;
    const auto bw = get_b(candidate, config, mode);
    if (!is_subset(candidate, get_s(bw, topology, config, mode))) continue;
    const auto objective = selection_objective(candidate, topology);
    if (result.selection.empty() || objective > result.objective) {
      result.selection = candidate;
      result.bandwidth = bw;
      result.objective = objective;
    }
  }
  return result;
}

UsbaResult run_rf_only(const Topology& topology, const SimConfig& config) {
  return usba(topology, config, LinkMode::RfOnly);
}

UsbaResult oracle_enumerate(const Topology& topology, const SimConfig& config, LinkMode mode) {
  if (topology.users.size() > config.usba.oracle_max_users) {
    throw InvalidArgument("oracle enumeration capped at " +
                          std::to_string(config.usba.oracle_max_users) + " users");
  }
  UsbaResult best;
  best.converged = true;
  for (std::size_t n_in = 0; n_in <= topology.n_indoor; ++n_in) {
    for (std::size_t n_out = 0; n_out <= topology.n_outdoor; ++n_out) {
      if (n_in + n_out == 0) continue;
      const auto bw = allocation_for_counts(n_in, n_out, config, mode);
      const auto feasible = get_s(bw, topology, config, mode);
      if (feasible.indoor.size() < n_in || feasible.outdoor.size() < n_out) continue;

      Selection pick{best_k(feasible.indoor, n_in, topology),
                     best_k(feasible.outdoor, n_out, topology)};
      const auto objective = selection_objective(pick, topology);
      if (objective > best.objective) {
        best.objective = objective;
        best.bandwidth = get_b(pick, config, mode);
        best.selection = std::move(pick);
      }
    }
  }
  return best;
}

}  // namespace vlcfl
