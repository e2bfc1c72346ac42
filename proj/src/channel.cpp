#include "vlcfl/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "vlcfl/error.hpp"

namespace vlcfl {
namespace {

constexpr double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }

}  // namespace

double lambertian_order(double half_intensity_deg) {
  const double c = std::cos(deg_to_rad(half_intensity_deg));
  if (!(half_intensity_deg > 0.0 && half_intensity_deg < 90.0) || c <= 0.0 || c >= 1.0) {
    throw InvalidArgument("half-intensity angle must lie in (0, 90) degrees");
  }
  // Degree-to-radian conversion leaves a few ulps of error on the textbook
  // angles (60 -> 1, 45 -> 2); snap those back to the integer order.
  const double m = -1.0 / std::log2(c);
  const double nearest = std::round(m);
  return std::abs(m - nearest) < 1e-12 ? nearest : m;
}

double concentrator_gain(double incidence_deg, double fov_half_deg, double refractive_index) {
  if (incidence_deg < 0.0) throw InvalidArgument("incidence angle must be non-negative");
  if (incidence_deg > fov_half_deg) return 0.0;
  const double s = std::sin(deg_to_rad(fov_half_deg));
  return refractive_index * refractive_index / (s * s);
}

double vlc_channel_gain(const Point3& ap, const Point3& receiver, const VlcParams& p) {
  const double drop = ap.z - receiver.z;
  if (!(drop > 0.0)) throw InvalidArgument("VLC AP must be above the receiver plane");
  const double d = distance(ap, receiver);
  const double cos_theta = drop / d;
  const double theta_deg = std::acos(std::min(cos_theta, 1.0)) * 180.0 / std::numbers::pi;
  const double g = concentrator_gain(theta_deg, p.fov_half_deg, p.refractive_index);
  if (g == 0.0) return 0.0;
  const double m = lambertian_order(p.half_intensity_deg);
  return (m + 1.0) * p.pd_area_m2 / (2.0 * std::numbers::pi * d * d) * p.filter_gain * g *
         std::pow(cos_theta, m) * cos_theta;
}

double vlc_sinr(const UserNode& user, const Topology& topology, double rb_bandwidth_hz,
                const VlcParams& p) {
  if (!user.indoor) throw InvalidArgument("VLC SINR requested for an outdoor user");
  if (!(rb_bandwidth_hz > 0.0)) throw InvalidArgument("VLC RB bandwidth must be positive");
  if (topology.vlc_aps.empty()) throw InvalidArgument("topology has no VLC access points");

  std::vector<double> received;
  received.reserve(topology.vlc_aps.size());
  for (const auto& ap : topology.vlc_aps) {
    const double amp = p.conversion_efficiency * vlc_channel_gain(ap, user.position, p) *
                       p.optical_power_w;
    received.push_back(amp * amp);
  }

  const double noise = p.noise_psd * rb_bandwidth_hz;
  double best = 0.0;
  for (std::size_t k = 0; k < received.size(); ++k) {
    double interference = 0.0;
    for (std::size_t l = 0; l < received.size(); ++l) {
      if (l != k) interference += received[l];
    }
    best = std::max(best, received[k] / (noise + interference));
  }
  return best;
}

double vlc_rate(double sinr, double rb_bandwidth_hz) {
  if (sinr < 0.0) throw InvalidArgument("SINR must be non-negative");
  if (!(rb_bandwidth_hz > 0.0)) throw InvalidArgument("VLC RB bandwidth must be positive");
  constexpr double kScale = 2.0 / (std::numbers::pi * std::numbers::e);
  return rb_bandwidth_hz / 2.0 * std::log2(1.0 + kScale * sinr);
}

double rf_channel_gain(double distance_m, bool indoor, const RfParams& p) {
  if (!(distance_m > 0.0)) throw InvalidArgument("RF distance must be positive");
  double loss_db = p.path_loss_ref_db + p.path_loss_slope_db * std::log10(distance_m / 1000.0);
  if (indoor) loss_db += p.indoor_penetration_db;
  return std::pow(10.0, -loss_db / 10.0);
}

double rf_rate(double tx_power_w, double channel_gain, double interference_w,
               double rb_bandwidth_hz, double noise_psd) {
  if (tx_power_w < 0.0 || channel_gain < 0.0 || interference_w < 0.0) {
    throw InvalidArgument("RF powers and gains must be non-negative");
  }
  if (!(rb_bandwidth_hz > 0.0) || !(noise_psd > 0.0)) {
    throw InvalidArgument("RF bandwidth and noise PSD must be positive");
  }
  const double sinr = tx_power_w * channel_gain / (interference_w + rb_bandwidth_hz * noise_psd);
  return rb_bandwidth_hz * std::log2(1.0 + sinr);
}

}  // namespace vlcfl
