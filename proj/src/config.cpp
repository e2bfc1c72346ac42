#include "vlcfl/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <type_traits>
#include <sstream>

#include "numfmt.hpp"
#include "vlcfl/error.hpp"

namespace vlcfl {
namespace {

using detail::format_double;
using detail::parse_double;
using detail::parse_uint;
using detail::trim;

struct Field {
  std::string name;
  std::function<void(SimConfig&, std::string_view)> set;
  std::function<std::string(const SimConfig&)> get;
};

[[noreturn]] void bad_value(std::string_view key, std::string_view value) {
  throw ConfigError("invalid value '" + std::string(value) + "' for " + std::string(key));
}

template <typename Access>
Field real(std::string name, Access access) {
  return {name,
          [name, access](SimConfig& c, std::string_view v) {
            auto parsed = parse_double(v);
            if (!parsed || !std::isfinite(*parsed)) bad_value(name, v);
            access(c) = *parsed;
          },
          [access](const SimConfig& c) { return format_double(access(c)); }};
}

template <typename Access>
Field count(std::string name, Access access) {
  return {name,
          [name, access](SimConfig& c, std::string_view v) {
            auto parsed = parse_uint(v);
            if (!parsed) bad_value(name, v);
            access(c) = static_cast<std::remove_reference_t<decltype(access(c))>>(*parsed);
          },
          [access](const SimConfig& c) { return std::to_string(access(c)); }};
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  while (true) {
    const auto pos = s.find(sep);
    parts.push_back(trim(s.substr(0, pos)));
    if (pos == std::string_view::npos) break;
    s.remove_prefix(pos + 1);
  }
  return parts;
}

template <typename T>
std::string join(const std::vector<T>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(xs[i]);
  }
  return out;
}

const std::vector<Field>& fields() {
  static const std::vector<Field> table = [] {
    std::vector<Field> f;
    // Optical downlink.
    f.push_back(real("vlc_optical_power_w", [](auto& c) -> auto& { return c.vlc.optical_power_w; }));
    f.push_back(real("vlc_total_bandwidth_hz", [](auto& c) -> auto& { return c.vlc.total_bandwidth_hz; }));
    f.push_back(real("vlc_pd_area_m2", [](auto& c) -> auto& { return c.vlc.pd_area_m2; }));
    f.push_back(real("vlc_half_intensity_deg", [](auto& c) -> auto& { return c.vlc.half_intensity_deg; }));
    f.push_back(real("vlc_filter_gain", [](auto& c) -> auto& { return c.vlc.filter_gain; }));
    f.push_back(real("vlc_fov_half_deg", [](auto& c) -> auto& { return c.vlc.fov_half_deg; }));
    f.push_back(real("vlc_refractive_index", [](auto& c) -> auto& { return c.vlc.refractive_index; }));
    f.push_back(real("vlc_conversion_efficiency", [](auto& c) -> auto& { return c.vlc.conversion_efficiency; }));
    f.push_back(real("vlc_noise_psd", [](auto& c) -> auto& { return c.vlc.noise_psd; }));
    // Cellular links.
    f.push_back(real("rf_total_bandwidth_hz", [](auto& c) -> auto& { return c.rf.total_bandwidth_hz; }));
    f.push_back(real("rf_bs_power_w", [](auto& c) -> auto& { return c.rf.bs_power_w; }));
    f.push_back(real("rf_noise_psd", [](auto& c) -> auto& { return c.rf.noise_psd; }));
    f.push_back(real("rf_uplink_interference_w", [](auto& c) -> auto& { return c.rf.uplink_interference_w; }));
    f.push_back(real("rf_downlink_interference_w", [](auto& c) -> auto& { return c.rf.downlink_interference_w; }));
    f.push_back(real("rf_indoor_penetration_db", [](auto& c) -> auto& { return c.rf.indoor_penetration_db; }));
    f.push_back(real("rf_path_loss_ref_db", [](auto& c) -> auto& { return c.rf.path_loss_ref_db; }));
    f.push_back(real("rf_path_loss_slope_db", [](auto& c) -> auto& { return c.rf.path_loss_slope_db; }));
    f.push_back(real("rf_min_distance_m", [](auto& c) -> auto& { return c.rf.min_distance_m; }));
    // Layout and users.
    f.push_back(count("n_users", [](auto& c) -> auto& { return c.topology.n_users; }));
    f.push_back(real("indoor_fraction", [](auto& c) -> auto& { return c.topology.indoor_fraction; }));
    f.push_back(real("cell_radius_m", [](auto& c) -> auto& { return c.topology.cell_radius_m; }));
    f.push_back(count("n_aps", [](auto& c) -> auto& { return c.topology.n_aps; }));
    f.push_back(real("ap_ring_fraction", [](auto& c) -> auto& { return c.topology.ap_ring_fraction; }));
    f.push_back(real("ap_drop_m", [](auto& c) -> auto& { return c.topology.ap_drop_m; }));
    f.push_back(real("receiver_height_m", [](auto& c) -> auto& { return c.topology.receiver_height_m; }));
    f.push_back(real("ap_coverage_radius_m", [](auto& c) -> auto& { return c.topology.ap_coverage_radius_m; }));
    f.push_back(count("shard_size", [](auto& c) -> auto& { return c.topology.shard_size; }));
    f.push_back(real("tx_power_w", [](auto& c) -> auto& { return c.topology.tx_power_w; }));
    f.push_back(real("cycles_min", [](auto& c) -> auto& { return c.topology.cycles_min; }));
    f.push_back(real("cycles_max", [](auto& c) -> auto& { return c.topology.cycles_max; }));
    f.push_back(real("cpu_freq_min_hz", [](auto& c) -> auto& { return c.topology.cpu_freq_min_hz; }));
    f.push_back(real("cpu_freq_max_hz", [](auto& c) -> auto& { return c.topology.cpu_freq_max_hz; }));
    f.push_back(real("capacitance_coeff", [](auto& c) -> auto& { return c.topology.capacitance_coeff; }));
    f.push_back(real("energy_budget_j", [](auto& c) -> auto& { return c.topology.energy_budget_j; }));
    // Round budget and cost model.
    f.push_back(real("t_round_s", [](auto& c) -> auto& { return c.system.t_round_s; }));
    f.push_back(real("payload_bits", [](auto& c) -> auto& { return c.system.payload_bits; }));
    f.push_back(real("backhaul_delay_s", [](auto& c) -> auto& { return c.system.backhaul_delay_s; }));
    f.push_back(real("nu", [](auto& c) -> auto& { return c.system.nu; }));
    f.push_back(real("local_accuracy", [](auto& c) -> auto& { return c.system.local_accuracy; }));
    // Selection/allocation iteration.
    f.push_back(count("max_iterations", [](auto& c) -> auto& { return c.usba.max_iterations; }));
    f.push_back(real("initial_rf_rb_hz", [](auto& c) -> auto& { return c.usba.initial_rf_rb_hz; }));
    f.push_back(real("initial_vlc_rb_hz", [](auto& c) -> auto& { return c.usba.initial_vlc_rb_hz; }));
    f.push_back(count("oracle_max_users", [](auto& c) -> auto& { return c.usba.oracle_max_users; }));
    // Training.
    f.push_back(real("learning_rate", [](auto& c) -> auto& { return c.fl.learning_rate; }));
    f.push_back(count("local_epochs", [](auto& c) -> auto& { return c.fl.local_epochs; }));
    f.push_back(count("global_rounds", [](auto& c) -> auto& { return c.fl.global_rounds; }));
    f.push_back(real("init_scale", [](auto& c) -> auto& { return c.fl.init_scale; }));
    f.push_back(count("test_size", [](auto& c) -> auto& { return c.fl.test_size; }));
    // Experiment plumbing.
    f.push_back({"seeds",
                 [](SimConfig& c, std::string_view v) {
                   std::vector<std::uint64_t> seeds;
                   for (auto part : split(v, ',')) {
                     auto s = parse_uint(part);
                     if (!s) bad_value("seeds", v);
                     seeds.push_back(*s);
                   }
                   c.experiment.seeds = std::move(seeds);
                 },
                 [](const SimConfig& c) { return join(c.experiment.seeds); }});
    f.push_back({"sweep_users",
                 [](SimConfig& c, std::string_view v) {
                   std::vector<std::size_t> ns;
                   for (auto part : split(v, ',')) {
                     auto n = parse_uint(part);
                     if (!n) bad_value("sweep_users", v);
                     ns.push_back(static_cast<std::size_t>(*n));
                   }
                   c.experiment.sweep_users = std::move(ns);
                 },
                 [](const SimConfig& c) { return join(c.experiment.sweep_users); }});
    f.push_back({"sweep_bandwidths",
                 [](SimConfig& c, std::string_view v) {
                   std::vector<std::pair<double, double>> pairs;
                   for (auto part : split(v, ',')) {
                     auto halves = split(part, ':');
                     if (halves.size() != 2) bad_value("sweep_bandwidths", v);
                     auto br = parse_double(halves[0]);
                     auto bv = parse_double(halves[1]);
                     if (!br || !bv) bad_value("sweep_bandwidths", v);
                     pairs.emplace_back(*br, *bv);
                   }
                   c.experiment.sweep_bandwidths = std::move(pairs);
                 },
                 [](const SimConfig& c) {
                   std::string out;
                   for (std::size_t i = 0; i < c.experiment.sweep_bandwidths.size(); ++i) {
                     if (i) out += ',';
                     out += format_double(c.experiment.sweep_bandwidths[i].first) + ':' +
                            format_double(c.experiment.sweep_bandwidths[i].second);
                   }
                   return out;
                 }});
    f.push_back({"dataset_path",
                 [](SimConfig& c, std::string_view v) { c.experiment.dataset_path = std::string(v); },
                 [](const SimConfig& c) { return c.experiment.dataset_path; }});
    f.push_back(count("synthetic_rows", [](auto& c) -> auto& { return c.experiment.synthetic_rows; }));
    f.push_back(count("synthetic_seed", [](auto& c) -> auto& { return c.experiment.synthetic_seed; }));
    f.push_back(count("threads", [](auto& c) -> auto& { return c.experiment.threads; }));
    return f;
  }();
  return table;
}

void require(bool ok, const char* field, const char* rule) {
  if (!ok) throw ConfigError(std::string(field) + " " + rule);
}

}  // namespace

std::string_view to_string(LinkMode mode) noexcept {
  return mode == LinkMode::Hybrid ? "hybrid" : "rf_only";
}

LinkMode parse_link_mode(std::string_view text) {
  if (text == "hybrid") return LinkMode::Hybrid;
  if (text == "rf_only") return LinkMode::RfOnly;
  throw ConfigError("unknown mode '" + std::string(text) + "' (expected hybrid or rf_only)");
}

void validate(const SimConfig& c) {
  constexpr const char* kPositive = "must be strictly positive";
  require(c.vlc.optical_power_w > 0, "vlc_optical_power_w", kPositive);
  require(c.vlc.total_bandwidth_hz > 0, "vlc_total_bandwidth_hz", kPositive);
  require(c.vlc.pd_area_m2 > 0, "vlc_pd_area_m2", kPositive);
  require(c.vlc.half_intensity_deg > 0 && c.vlc.half_intensity_deg < 90, "vlc_half_intensity_deg",
          "must lie in (0, 90)");
  require(c.vlc.filter_gain > 0, "vlc_filter_gain", kPositive);
  require(c.vlc.fov_half_deg > 0 && c.vlc.fov_half_deg <= 90, "vlc_fov_half_deg", "must lie in (0, 90]");
  require(c.vlc.refractive_index > 0, "vlc_refractive_index", kPositive);
  require(c.vlc.conversion_efficiency > 0, "vlc_conversion_efficiency", kPositive);
  require(c.vlc.noise_psd > 0, "vlc_noise_psd", kPositive);

  require(c.rf.total_bandwidth_hz > 0, "rf_total_bandwidth_hz", kPositive);
  require(c.rf.bs_power_w > 0, "rf_bs_power_w", kPositive);
  require(c.rf.noise_psd > 0, "rf_noise_psd", kPositive);
  require(c.rf.uplink_interference_w >= 0, "rf_uplink_interference_w", "must be non-negative");
  require(c.rf.downlink_interference_w >= 0, "rf_downlink_interference_w", "must be non-negative");
  require(c.rf.indoor_penetration_db >= 0, "rf_indoor_penetration_db", "must be non-negative");
  require(c.rf.min_distance_m > 0, "rf_min_distance_m", kPositive);

  const auto& t = c.topology;
  require(t.n_users >= 1, "n_users", "must be at least 1");
  require(t.indoor_fraction >= 0 && t.indoor_fraction <= 1, "indoor_fraction", "must lie in [0, 1]");
  require(t.cell_radius_m > 0, "cell_radius_m", kPositive);
  require(t.n_aps >= 1, "n_aps", "must be at least 1");
  require(t.ap_ring_fraction >= 0 && t.ap_ring_fraction < 1, "ap_ring_fraction", "must lie in [0, 1)");
  require(t.ap_drop_m > 0, "ap_drop_m", kPositive);
  require(t.receiver_height_m >= 0, "receiver_height_m", "must be non-negative");
  require(t.ap_coverage_radius_m > 0, "ap_coverage_radius_m", kPositive);
  require(t.ap_ring_fraction * t.cell_radius_m + t.ap_coverage_radius_m <= t.cell_radius_m,
          "ap_coverage_radius_m", "puts indoor users outside the cell");
  require(t.shard_size >= 1, "shard_size", "must be at least 1");
  require(t.tx_power_w > 0, "tx_power_w", kPositive);
  require(t.cycles_min > 0, "cycles_min", kPositive);
  require(t.cycles_max >= t.cycles_min, "cycles_max", "must be >= cycles_min");
  require(t.cpu_freq_min_hz > 0, "cpu_freq_min_hz", kPositive);
  require(t.cpu_freq_max_hz >= t.cpu_freq_min_hz, "cpu_freq_max_hz", "must be >= cpu_freq_min_hz");
  require(t.capacitance_coeff > 0, "capacitance_coeff", kPositive);
  require(t.energy_budget_j > 0, "energy_budget_j", kPositive);

  require(c.system.t_round_s > 0, "t_round_s", kPositive);
  require(c.system.payload_bits > 0, "payload_bits", kPositive);
  require(c.system.backhaul_delay_s >= 0, "backhaul_delay_s", "must be non-negative");
  require(c.system.nu > 0, "nu", kPositive);
  require(c.system.local_accuracy > 0 && c.system.local_accuracy < 1, "local_accuracy",
          "must lie in (0, 1)");

  require(c.usba.max_iterations >= 1, "max_iterations", "must be at least 1");
  require(c.usba.initial_rf_rb_hz >= 0, "initial_rf_rb_hz", "must be non-negative");
  require(c.usba.initial_vlc_rb_hz >= 0, "initial_vlc_rb_hz", "must be non-negative");

  require(c.fl.learning_rate >= 0, "learning_rate", "must be non-negative");
  require(c.fl.global_rounds >= 1, "global_rounds", "must be at least 1");
  require(c.fl.init_scale >= 0, "init_scale", "must be non-negative");
  require(c.fl.test_size >= 2, "test_size", "must be at least 2 for R^2 to be defined");

  require(!c.experiment.seeds.empty(), "seeds", "must not be empty");
  for (const auto& [br, bv] : c.experiment.sweep_bandwidths) {
    require(br > 0 && bv > 0, "sweep_bandwidths", "entries must be strictly positive");
  }
  for (auto n : c.experiment.sweep_users) require(n >= 1, "sweep_users", "entries must be at least 1");
}

void set_config_value(SimConfig& config, std::string_view key, std::string_view value) {
  key = trim(key);
  for (const auto& f : fields()) {
    if (f.name == key) {
      f.set(config, trim(value));
      return;
    }
  }
  throw ConfigError("unknown config key '" + std::string(key) + "'");
}

void apply_config_text(SimConfig& config, std::string_view text) {
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    }
    try {
      set_config_value(config, line.substr(0, eq), line.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
}

SimConfig load_config_file(const std::string& path, SimConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  apply_config_text(base, buf.str());
  return base;
}

std::string dump_config(const SimConfig& config) {
  std::string out;
  for (const auto& f : fields()) out += f.name + " = " + f.get(config) + '\n';
  return out;
}

std::vector<std::string> config_keys() {
  std::vector<std::string> keys;
  for (const auto& f : fields()) keys.push_back(f.name);
  return keys;
}

}  // namespace vlcfl
