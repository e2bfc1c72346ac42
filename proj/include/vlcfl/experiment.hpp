#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vlcfl/config.hpp"
#include "vlcfl/dataset.hpp"
#include "vlcfl/topology.hpp"
#include "vlcfl/usba.hpp"

namespace vlcfl {

/// "hybrid", "rf_only" or "both".
std::vector<LinkMode> parse_modes(std::string_view text);

// Sub-streams of one experiment seed. The data split and the initial model
// depend only on the seed, so both modes train on the same shards and are
// scored on the same test rows.
inline constexpr std::uint64_t kTopologyStream = 1;
inline constexpr std::uint64_t kPartitionStream = 2;
inline constexpr std::uint64_t kModelStream = 3;

/// Samples per user when the non-test rows are dealt out evenly.
std::size_t shard_size_for(std::size_t rows, std::size_t n_users, std::size_t test_size);

struct SelectionRun {
  Topology topology;
  UsbaResult result;
};

/// Topology for (config, seed) with every shard sized for `rows` dataset
/// rows, followed by USBA (hybrid) or the RF-only baseline.
SelectionRun select_users(const SimConfig& config, std::size_t rows, std::uint64_t seed, LinkMode mode);

struct ExperimentRecord {
  std::uint64_t seed = 0;
  LinkMode mode = LinkMode::Hybrid;
  std::size_t n_users = 0;
  double rf_bandwidth_hz = 0.0;   // B_R of this run
  double vlc_bandwidth_hz = 0.0;  // B_V of this run
  UsbaResult usba;
  double final_r2 = 0.0;          // NaN when nobody was selected
  std::vector<double> r2_trace;
};

struct ExperimentReport {
  std::string command;
  std::string dataset_name;
  std::size_t dataset_rows = 0;
  SimConfig config;
  std::vector<std::uint64_t> seeds;
  std::vector<LinkMode> modes;
  std::vector<ExperimentRecord> records;
};

/// One (seed, mode) run at the topology size and bandwidths in `config`.
/// Failures are rethrown as ExperimentError carrying the seed.
ExperimentRecord run_single(const SimConfig& config, const Dataset& data, std::uint64_t seed,
                            LinkMode mode);

/// Every seed x mode at the configured N. Runs execute concurrently on
/// config.experiment.threads workers; records come back ordered by
/// (seed, mode) whatever the completion order.
ExperimentReport run_experiment(const SimConfig& config, std::span<const std::uint64_t> seeds,
                                std::span<const LinkMode> modes, const Dataset& data);

/// run_experiment for each N in config.experiment.sweep_users, in order.
ExperimentReport sweep_users(const SimConfig& config, std::span<const std::uint64_t> seeds,
                             std::span<const LinkMode> modes, const Dataset& data);

/// run_experiment for each (B_R, B_V) in config.experiment.sweep_bandwidths.
ExperimentReport sweep_bandwidth(const SimConfig& config, std::span<const std::uint64_t> seeds,
                                 std::span<const LinkMode> modes, const Dataset& data);

struct SummaryRow {
  double rf_bandwidth_hz = 0.0;
  double vlc_bandwidth_hz = 0.0;
  LinkMode mode = LinkMode::Hybrid;
  std::size_t n_users = 0;
  std::size_t runs = 0;
  std::size_t converged_runs = 0;
  double selected_mean = 0.0;
  double selected_std = 0.0;
  std::size_t trained_runs = 0;  // runs with a finite final R^2
  double final_r2_mean = 0.0;
  double final_r2_std = 0.0;
};

/// Per (B_R, B_V, mode, N) group, in order of first appearance. Standard
/// deviations use the n - 1 denominator and are 0 for a single run.
std::vector<SummaryRow> summarize(const ExperimentReport& report);

void write_records_csv(std::ostream& out, const ExperimentReport& report);
void write_trace_csv(std::ostream& out, const ExperimentReport& report);
void write_summary_csv(std::ostream& out, const ExperimentReport& report);
void write_manifest(std::ostream& out, const ExperimentReport& report);

/// Writes records.csv, r2_trace.csv, summary.csv and manifest.txt into
/// `out_dir`, creating it if needed. Throws InvalidArgument for an empty
/// report and std::runtime_error when a file cannot be written.
void emit_report(const ExperimentReport& report, const std::filesystem::path& out_dir);

/// The configured CSV, or the synthetic set when no path is given.
Dataset resolve_dataset(const SimConfig& config);

}  // namespace vlcfl
