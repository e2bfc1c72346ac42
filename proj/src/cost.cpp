#include "vlcfl/cost.hpp"

#include <cmath>

#include "vlcfl/error.hpp"

namespace vlcfl {
namespace {

double local_iterations(double local_accuracy, double nu) {
  if (!(local_accuracy > 0.0 && local_accuracy < 1.0)) {
    throw InvalidArgument("local accuracy must lie in (0, 1)");
  }
  if (!(nu > 0.0)) throw InvalidArgument("nu must be positive");
  return nu * std::log(1.0 / local_accuracy);
}

}  // namespace

double computation_energy(const UserNode& user, double local_accuracy, double nu) {
  const double cycles = user.cycles_per_sample * static_cast<double>(user.shard_size);
  return local_iterations(local_accuracy, nu) * user.capacitance_coeff * cycles / 2.0 *
         user.cpu_freq_hz * user.cpu_freq_hz;
}

double computation_time(const UserNode& user, double local_accuracy, double nu) {
  if (!(user.cpu_freq_hz > 0.0)) throw InvalidArgument("CPU frequency must be positive");
  const double cycles = user.cycles_per_sample * static_cast<double>(user.shard_size);
  return local_iterations(local_accuracy, nu) * cycles / user.cpu_freq_hz;
}

double transmission_time(double payload_bits, double rate_bps) {
  if (payload_bits < 0.0) throw InvalidArgument("payload must be non-negative");
  if (!(rate_bps > 0.0)) throw InfeasibleLink("link rate is zero; payload cannot be delivered");
  return payload_bits / rate_bps;
}

CostBreakdown cost_breakdown(const UserNode& user, const LinkRates& rates, const SimConfig& config) {
  const auto& sys = config.system;
  CostBreakdown c;
  c.t_cmp = computation_time(user, sys.local_accuracy, sys.nu);
  c.e_cmp = computation_energy(user, sys.local_accuracy, sys.nu);
  if (sys.payload_bits > 0.0) {
    c.t_up = transmission_time(sys.payload_bits, rates.uplink_bps);
    c.t_down = transmission_time(sys.payload_bits, rates.downlink_bps);
    if (rates.downlink == Downlink::Vlc) c.backhaul_delay = sys.backhaul_delay_s;
  }
  c.e_com = c.t_up * user.tx_power_w;
  return c;
}

}  // namespace vlcfl
