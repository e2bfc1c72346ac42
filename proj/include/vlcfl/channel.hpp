#pragma once

#include "vlcfl/types.hpp"

namespace vlcfl {

// Line-of-sight optical downlink parameters. Angles are in degrees.
struct VlcParams {
  double optical_power_w = 9.0;           // P_v, per AP
  double pd_area_m2 = 1e-4;               // A_p
  double half_intensity_deg = 60.0;       // theta_1/2
  double filter_gain = 1.0;               // T_s
  double fov_half_deg = 90.0;             // Theta_F
  double refractive_index = 1.5;          // n_0
  double conversion_efficiency = 0.53;    // gamma, A/W
  double noise_psd = 1e-21;               // A^2/Hz
  double total_bandwidth_hz = 40e6;       // B_V
};

// OFDMA cellular link parameters. Interference terms are fixed powers in W
// standing in for co-channel users and base stations of neighbouring cells.
struct RfParams {
  double bs_power_w = 1.0;                // P_B
  double noise_psd = 1e-21;               // W/Hz
  double total_bandwidth_hz = 20e6;       // B_R
  double uplink_interference_w = 4e-12;
  double downlink_interference_w = 4e-11;
  double indoor_penetration_db = 20.0;
  double path_loss_ref_db = 128.1;        // loss at 1 km
  double path_loss_slope_db = 37.6;       // per decade of distance
  double min_distance_m = 1.0;            // clamp for users next to the BS
};

/// Lambertian emission order m = -1 / log2(cos(theta_1/2)).
/// Throws InvalidArgument unless 0 < theta_1/2 < 90 degrees.
double lambertian_order(double half_intensity_deg);

/// Optical concentrator gain: n0^2 / sin^2(fov) inside the field of view,
/// zero outside. theta == 0 (normal incidence) counts as inside.
double concentrator_gain(double incidence_deg, double fov_half_deg, double refractive_index);

/// LoS DC gain between a downward-facing AP and an upward-facing receiver.
/// Orientation makes the irradiance and incidence angles equal, with
/// cos = height drop / distance. Throws if the AP is not above the receiver.
double vlc_channel_gain(const Point3& ap, const Point3& receiver, const VlcParams& p);

/// Best SINR over all APs for an indoor user on an RB of width `rb_bandwidth_hz`.
/// Every other AP is treated as an interferer. Throws for outdoor users.
double vlc_sinr(const UserNode& user, const Topology& topology, double rb_bandwidth_hz,
                const VlcParams& p);

/// Lower bound on the achievable rate of an amplitude-constrained optical
/// link: B/2 * log2(1 + 2/(pi e) * sinr).
double vlc_rate(double sinr, double rb_bandwidth_hz);

/// Deterministic log-distance path gain (linear scale), with penetration
/// loss added for indoor receivers.
double rf_channel_gain(double distance_m, bool indoor, const RfParams& p);

/// Shannon rate on a single RB.
double rf_rate(double tx_power_w, double channel_gain, double interference_w,
               double rb_bandwidth_hz, double noise_psd);

}  // namespace vlcfl
