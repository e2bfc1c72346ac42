#pragma once

#include "vlcfl/config.hpp"
#include "vlcfl/types.hpp"

namespace vlcfl {

// Per-round CPU energy: nu * alpha_n * c_n * D_n / 2 * f_n^2 * ln(1/theta).
double computation_energy(const UserNode& user, double local_accuracy, double nu);

// Per-round CPU time: nu * c_n * D_n * ln(1/theta) / f_n.
double computation_time(const UserNode& user, double local_accuracy, double nu);

// Shortest time that moves `payload_bits` at `rate_bps`. Zero payload costs
// nothing; a non-positive rate throws InfeasibleLink.
double transmission_time(double payload_bits, double rate_bps);

enum class Downlink { Rf, Vlc };

struct LinkRates {
  double uplink_bps = 0.0;
  double downlink_bps = 0.0;
  Downlink downlink = Downlink::Rf;
};

struct CostBreakdown {
  double t_cmp = 0.0;
  double t_up = 0.0;
  double t_down = 0.0;
  double e_cmp = 0.0;
  double e_com = 0.0;
  double backhaul_delay = 0.0;  // only paid when the model arrives over VLC

  double round_time() const noexcept { return t_down + t_up + t_cmp + backhaul_delay; }
  double energy() const noexcept { return e_com + e_cmp; }
};

CostBreakdown cost_breakdown(const UserNode& user, const LinkRates& rates, const SimConfig& config);

}  // namespace vlcfl
