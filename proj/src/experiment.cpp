#include "vlcfl/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <limits>
#include <ostream>
#include <thread>

#include "numfmt.hpp"
#include "vlcfl/error.hpp"
#include "vlcfl/federated.hpp"
#include "vlcfl/random.hpp"

namespace vlcfl {
namespace {

using detail::format_double;

// Runs body(i) for i in [0, n) on up to `threads` workers. The first failure
// by index is rethrown after every worker has joined.
template <typename Body>
void parallel_for(std::size_t n, std::size_t threads, Body body) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        body(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

ExperimentReport run_grid(const std::string& command, const std::vector<SimConfig>& points,
                          const SimConfig& base, std::span<const std::uint64_t> seeds,
                          std::span<const LinkMode> modes, const Dataset& data) {
  if (seeds.empty()) throw InvalidArgument("at least one seed is required");
  if (modes.empty()) throw InvalidArgument("at least one mode is required");
  for (const auto& p : points) validate(p);

  ExperimentReport report;
  report.command = command;
  report.dataset_name = data.name;
  report.dataset_rows = data.size();
  report.config = base;
  report.seeds.assign(seeds.begin(), seeds.end());
  report.modes.assign(modes.begin(), modes.end());

  const std::size_t per_point = seeds.size() * modes.size();
  report.records.resize(points.size() * per_point);
  parallel_for(report.records.size(), base.experiment.threads, [&](std::size_t i) {
    const auto& point = points[i / per_point];
    const auto seed = seeds[(i % per_point) / modes.size()];
    const auto mode = modes[i % modes.size()];
    report.records[i] = run_single(point, data, seed, mode);
  });
  return report;
}

double mean_of(const std::vector<double>& xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return xs.empty() ? 0.0 : s / static_cast<double>(xs.size());
}

double sample_std(const std::vector<double>& xs, double mean) {
  if (xs.size() < 2) return 0.0;
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

std::string join_ids(const std::vector<UserId>& ids) {
  std::string out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) out += ';';
    out += std::to_string(ids[i]);
  }
  return out;
}

}  // namespace

std::vector<LinkMode> parse_modes(std::string_view text) {
  if (text == "both") return {LinkMode::Hybrid, LinkMode::RfOnly};
  return {parse_link_mode(text)};
}

std::size_t shard_size_for(std::size_t rows, std::size_t n_users, std::size_t test_size) {
  if (n_users == 0) throw InvalidArgument("need at least one user");
  if (test_size + n_users > rows) {
    throw InvalidArgument(std::to_string(rows) + " rows cannot cover a test set of " +
                          std::to_string(test_size) + " and " + std::to_string(n_users) + " users");
  }
  return (rows - test_size) / n_users;
}

SelectionRun select_users(const SimConfig& config, std::size_t rows, std::uint64_t seed, LinkMode mode) {
  auto params = config.topology;
  params.shard_size = shard_size_for(rows, params.n_users, config.fl.test_size);
  SelectionRun run;
  run.topology = generate_topology(params, derive_seed(seed, kTopologyStream));
  run.result = mode == LinkMode::Hybrid ? usba(run.topology, config, LinkMode::Hybrid)
                                        : run_rf_only(run.topology, config);
  return run;
}

ExperimentRecord run_single(const SimConfig& config, const Dataset& data, std::uint64_t seed,
                            LinkMode mode) {
  ExperimentRecord rec;
  rec.seed = seed;
  rec.mode = mode;
  rec.n_users = config.topology.n_users;
  rec.rf_bandwidth_hz = config.rf.total_bandwidth_hz;
  rec.vlc_bandwidth_hz = config.vlc.total_bandwidth_hz;
  try {
    const auto sel = select_users(config, data.size(), seed, mode);
    rec.usba = sel.result;
    if (rec.usba.selection.empty()) {
      rec.final_r2 = std::numeric_limits<double>::quiet_NaN();
      return rec;
    }
    const auto fd = split_and_partition(data, rec.n_users, config.fl.test_size,
                                        derive_seed(seed, kPartitionStream));
    const auto training = run_federated_training(rec.usba.selection, fd.shards, fd.test, fd.scale,
                                                 config.fl, derive_seed(seed, kModelStream));
    rec.final_r2 = training.final_r2;
    rec.r2_trace = training.round_r2;
  } catch (const ExperimentError&) {
    throw;
  } catch (const std::exception& e) {
    throw ExperimentError(seed, std::string(to_string(mode)) + ", N=" + std::to_string(rec.n_users),
                          e.what());
  }
  return rec;
}

ExperimentReport run_experiment(const SimConfig& config, std::span<const std::uint64_t> seeds,
                                std::span<const LinkMode> modes, const Dataset& data) {
  return run_grid("run", {config}, config, seeds, modes, data);
}

ExperimentReport sweep_users(const SimConfig& config, std::span<const std::uint64_t> seeds,
                             std::span<const LinkMode> modes, const Dataset& data) {
  std::vector<SimConfig> points;
  for (auto n : config.experiment.sweep_users) {
    auto c = config;
    c.topology.n_users = n;
    points.push_back(std::move(c));
  }
  if (points.empty()) throw InvalidArgument("sweep_users is empty");
  return run_grid("sweep-users", points, config, seeds, modes, data);
}

ExperimentReport sweep_bandwidth(const SimConfig& config, std::span<const std::uint64_t> seeds,
                                 std::span<const LinkMode> modes, const Dataset& data) {
  std::vector<SimConfig> points;
  for (auto [br, bv] : config.experiment.sweep_bandwidths) {
    auto c = config;
    c.rf.total_bandwidth_hz = br;
    c.vlc.total_bandwidth_hz = bv;
    points.push_back(std::move(c));
  }
  if (points.empty()) throw InvalidArgument("sweep_bandwidths is empty");
  return run_grid("sweep-bandwidth", points, config, seeds, modes, data);
}

std::vector<SummaryRow> summarize(const ExperimentReport& report) {
  struct Group {
    SummaryRow row;
    std::vector<double> selected;
    std::vector<double> r2;
  };
  std::vector<Group> groups;
  for (const auto& rec : report.records) {
    auto it = std::find_if(groups.begin(), groups.end(), [&](const Group& g) {
      return g.row.rf_bandwidth_hz == rec.rf_bandwidth_hz &&
             g.row.vlc_bandwidth_hz == rec.vlc_bandwidth_hz && g.row.mode == rec.mode &&
             g.row.n_users == rec.n_users;
    });
    if (it == groups.end()) {
      Group g;
      g.row.rf_bandwidth_hz = rec.rf_bandwidth_hz;
      g.row.vlc_bandwidth_hz = rec.vlc_bandwidth_hz;
      g.row.mode = rec.mode;
      g.row.n_users = rec.n_users;
      groups.push_back(std::move(g));
      it = std::prev(groups.end());
    }
    it->row.runs += 1;
    it->row.converged_runs += rec.usba.converged ? 1 : 0;
    it->selected.push_back(static_cast<double>(rec.usba.selection.size()));
    if (std::isfinite(rec.final_r2)) it->r2.push_back(rec.final_r2);
  }

  std::vector<SummaryRow> rows;
  rows.reserve(groups.size());
  for (auto& g : groups) {
    g.row.selected_mean = mean_of(g.selected);
    g.row.selected_std = sample_std(g.selected, g.row.selected_mean);
    g.row.trained_runs = g.r2.size();
    if (g.r2.empty()) {
      g.row.final_r2_mean = g.row.final_r2_std = std::numeric_limits<double>::quiet_NaN();
    } else {
      g.row.final_r2_mean = mean_of(g.r2);
      g.row.final_r2_std = sample_std(g.r2, g.row.final_r2_mean);
    }
    rows.push_back(g.row);
  }
  return rows;
}

void write_records_csv(std::ostream& out, const ExperimentReport& report) {
  out << "seed,mode,n_users,rf_bandwidth_hz,vlc_bandwidth_hz,selected,selected_indoor,"
         "selected_outdoor,selected_samples,rb_uplink_hz,rb_downlink_hz,rb_vlc_hz,iterations,"
         "converged,final_r2,selected_ids\n";
  for (const auto& r : report.records) {
    const auto& u = r.usba;
    out << r.seed << ',' << to_string(r.mode) << ',' << r.n_users << ','
        << format_double(r.rf_bandwidth_hz) << ',' << format_double(r.vlc_bandwidth_hz) << ','
        << u.selection.size() << ',' << u.selection.indoor.size() << ','
        << u.selection.outdoor.size() << ',' << u.objective << ','
        << format_double(u.bandwidth.b_up) << ',' << format_double(u.bandwidth.b_down) << ','
        << format_double(u.bandwidth.b_vlc) << ',' << u.iterations << ','
        << (u.converged ? 1 : 0) << ',' << format_double(r.final_r2) << ','
        << join_ids(u.selection.all()) << '\n';
  }
}

void write_trace_csv(std::ostream& out, const ExperimentReport& report) {
  out << "seed,mode,n_users,rf_bandwidth_hz,vlc_bandwidth_hz,round,r2\n";
  for (const auto& r : report.records) {
    for (std::size_t k = 0; k < r.r2_trace.size(); ++k) {
      out << r.seed << ',' << to_string(r.mode) << ',' << r.n_users << ','
          << format_double(r.rf_bandwidth_hz) << ',' << format_double(r.vlc_bandwidth_hz) << ','
          << k + 1 << ',' << format_double(r.r2_trace[k]) << '\n';
    }
  }
}

void write_summary_csv(std::ostream& out, const ExperimentReport& report) {
  out << "rf_bandwidth_hz,vlc_bandwidth_hz,mode,n_users,runs,converged_runs,selected_mean,"
         "selected_std,trained_runs,final_r2_mean,final_r2_std\n";
  for (const auto& s : summarize(report)) {
    out << format_double(s.rf_bandwidth_hz) << ',' << format_double(s.vlc_bandwidth_hz) << ','
        << to_string(s.mode) << ',' << s.n_users << ',' << s.runs << ',' << s.converged_runs << ','
        << format_double(s.selected_mean) << ',' << format_double(s.selected_std) << ','
        << s.trained_runs << ',' << format_double(s.final_r2_mean) << ','
        << format_double(s.final_r2_std) << '\n';
  }
}

void write_manifest(std::ostream& out, const ExperimentReport& report) {
  out << "command = " << report.command << '\n';
  out << "dataset = " << report.dataset_name << '\n';
  out << "dataset_rows = " << report.dataset_rows << '\n';
  out << "run_seeds = ";
  for (std::size_t i = 0; i < report.seeds.size(); ++i) out << (i ? "," : "") << report.seeds[i];
  out << "\nmodes = ";
  for (std::size_t i = 0; i < report.modes.size(); ++i) out << (i ? "," : "") << to_string(report.modes[i]);
  out << "\nrecords = " << report.records.size() << '\n';
  out << "required_global_rounds = " << required_global_rounds(report.config.system.local_accuracy)
      << "  # bound for local_accuracy; training runs global_rounds\n";
  out << "\n# resolved configuration\n";
  out << dump_config(report.config);
}

void emit_report(const ExperimentReport& report, const std::filesystem::path& out_dir) {
  if (report.records.empty()) throw InvalidArgument("refusing to write an empty report");
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw std::runtime_error("cannot create '" + out_dir.string() + "': " + ec.message());

  const auto write = [&](const char* name, void (*fn)(std::ostream&, const ExperimentReport&)) {
    const auto path = out_dir / name;
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write '" + path.string() + "'");
    fn(f, report);
    f.flush();
    if (!f) throw std::runtime_error("write failed for '" + path.string() + "'");
  };
  write("records.csv", write_records_csv);
  write("r2_trace.csv", write_trace_csv);
  write("summary.csv", write_summary_csv);
  write("manifest.txt", write_manifest);
}

Dataset resolve_dataset(const SimConfig& config) {
  const auto& e = config.experiment;
  if (!e.dataset_path.empty()) return load_dataset(e.dataset_path);
  return synthetic_dataset(e.synthetic_rows, e.synthetic_seed);
}

}  // namespace vlcfl
