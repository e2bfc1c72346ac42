#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "vlcfl/channel.hpp"

namespace vlcfl {

enum class LinkMode { Hybrid, RfOnly };

std::string_view to_string(LinkMode mode) noexcept;
LinkMode parse_link_mode(std::string_view text);

// Network layout and per-user hardware draws.
struct TopologyParams {
  std::size_t n_users = 50;
  double indoor_fraction = 0.8;
  double cell_radius_m = 50.0;
  std::size_t n_aps = 4;
  double ap_ring_fraction = 0.5;        // AP ring radius as a fraction of the cell radius
  double ap_drop_m = 2.5;               // ceiling height above the receiver plane
  double receiver_height_m = 0.85;
  double ap_coverage_radius_m = 3.0;    // indoor users land within this of their AP
  std::size_t shard_size = 9;           // D_n
  double tx_power_w = 0.1;              // P_n
  double cycles_min = 2e7;              // c_n range, cycles per sample
  double cycles_max = 6e7;
  double cpu_freq_min_hz = 1e8;         // f_n range
  double cpu_freq_max_hz = 1e9;
  double capacitance_coeff = 2e-28;     // alpha
  double energy_budget_j = 2.0;         // gamma_nE
};

struct SystemParams {
  double t_round_s = 2.5;
  double payload_bits = 1e6;            // s
  double backhaul_delay_s = 0.05;       // t_d
  double nu = 1.0;
  double local_accuracy = 0.5;          // theta
};

struct UsbaParams {
  std::size_t max_iterations = 50;
  // Zero selects the conservative start (as if every user were selected).
  double initial_rf_rb_hz = 0.0;
  double initial_vlc_rb_hz = 0.0;
  std::size_t oracle_max_users = 14;
};

struct FlParams {
  double learning_rate = 0.05;
  std::size_t local_epochs = 5;
  std::size_t global_rounds = 100;
  double init_scale = 0.5;              // weights start uniform in [-scale, scale]
  std::size_t test_size = 17;
};

struct ExperimentParams {
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  std::vector<std::size_t> sweep_users{20, 30, 40, 50, 60, 70, 80, 90, 100};
  // (B_R, B_V) pairs in Hz.
  std::vector<std::pair<double, double>> sweep_bandwidths{
      {20e6, 40e6}, {10e6, 40e6}, {20e6, 20e6}, {10e6, 20e6}};
  std::string dataset_path;             // empty: bundled synthetic data
  std::size_t synthetic_rows = 506;
  std::uint64_t synthetic_seed = 2020;
  std::size_t threads = 0;              // 0: hardware concurrency
};

struct SimConfig {
  VlcParams vlc;
  RfParams rf;
  TopologyParams topology;
  SystemParams system;
  UsbaParams usba;
  FlParams fl;
  ExperimentParams experiment;
};

/// Throws ConfigError naming the first offending field.
void validate(const SimConfig& config);

/// Applies `key = value` assignments. Blank lines and `#` comments are ignored.
/// Unknown keys and malformed values raise ConfigError with the line number.
void apply_config_text(SimConfig& config, std::string_view text);

/// Single assignment, used for files and CLI overrides alike.
void set_config_value(SimConfig& config, std::string_view key, std::string_view value);

SimConfig load_config_file(const std::string& path, SimConfig base = {});

/// Every key with its current value, one `key = value` per line, in a fixed order.
std::string dump_config(const SimConfig& config);

std::vector<std::string> config_keys();

}  // namespace vlcfl
