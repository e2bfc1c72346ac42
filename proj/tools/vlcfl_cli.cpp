// Command-line front end: experiments, sweeps and the self-check suite.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "vlcfl/config.hpp"
#include "vlcfl/error.hpp"
#include "vlcfl/experiment.hpp"
#include "vlcfl/validation.hpp"

namespace {

struct CommonFlags {
  std::string config_path;
  std::string seeds;
  std::string out_dir = "out";
  std::string mode = "both";
  std::string dataset;
  std::vector<std::string> overrides;
  std::size_t threads = 0;
};

void add_common(CLI::App* cmd, CommonFlags& f, bool with_output) {
  cmd->add_option("--config", f.config_path, "key = value config file")->check(CLI::ExistingFile);
  cmd->add_option("--seeds", f.seeds, "comma-separated seeds (default: config seeds)");
  cmd->add_option("--set", f.overrides, "override one config key, key=value (repeatable)");
  cmd->add_option("--threads", f.threads, "worker threads, 0 = all cores");
  if (with_output) {
    cmd->add_option("--out", f.out_dir, "output directory")->capture_default_str();
    cmd->add_option("--mode", f.mode, "hybrid, rf_only or both")
        ->check(CLI::IsMember({"hybrid", "rf_only", "both"}))
        ->capture_default_str();
    cmd->add_option("--dataset", f.dataset, "14-column CSV (default: synthetic)")
        ->check(CLI::ExistingFile);
  }
}

vlcfl::SimConfig resolve_config(const CommonFlags& f) {
  vlcfl::SimConfig cfg;
  if (!f.config_path.empty()) cfg = vlcfl::load_config_file(f.config_path, cfg);
  for (const auto& kv : f.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw vlcfl::ConfigError("--set expects key=value, got '" + kv + "'");
    vlcfl::set_config_value(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (!f.seeds.empty()) vlcfl::set_config_value(cfg, "seeds", f.seeds);
  if (!f.dataset.empty()) cfg.experiment.dataset_path = f.dataset;
  if (f.threads != 0) cfg.experiment.threads = f.threads;
  vlcfl::validate(cfg);
  return cfg;
}

void print_summary(const vlcfl::ExperimentReport& report) {
  std::printf("%-10s %-10s %-8s %5s %6s %14s %12s\n", "B_R[MHz]", "B_V[MHz]", "mode", "N", "runs",
              "selected", "final R2");
  for (const auto& s : vlcfl::summarize(report)) {
    std::printf("%-10.3g %-10.3g %-8s %5zu %6zu %7.2f+-%-5.2f %6.3f+-%.3f\n",
                s.rf_bandwidth_hz / 1e6, s.vlc_bandwidth_hz / 1e6,
                std::string(vlcfl::to_string(s.mode)).c_str(), s.n_users, s.runs, s.selected_mean,
                s.selected_std, s.final_r2_mean, s.final_r2_std);
  }
}

using Experiment = vlcfl::ExperimentReport (*)(const vlcfl::SimConfig&, std::span<const std::uint64_t>,
                                               std::span<const vlcfl::LinkMode>, const vlcfl::Dataset&);

int run_experiment_command(const CommonFlags& f, Experiment fn) {
  const auto cfg = resolve_config(f);
  const auto data = vlcfl::resolve_dataset(cfg);
  const auto modes = vlcfl::parse_modes(f.mode);
  const auto report = fn(cfg, cfg.experiment.seeds, modes, data);
  vlcfl::emit_report(report, f.out_dir);
  print_summary(report);
  std::printf("wrote %zu records to %s\n", report.records.size(), f.out_dir.c_str());
  return 0;
}

int run_validate(const CommonFlags& f, const vlcfl::ValidationOptions& opts) {
  const auto cfg = resolve_config(f);
  const auto checks = vlcfl::run_validation(cfg, opts);
  bool ok = true;
  for (const auto& c : checks) {
    std::printf("[%s] %-36s cases=%-6zu %s\n", c.passed ? "PASS" : "FAIL", c.name.c_str(), c.cases,
                c.detail.c_str());
    ok = ok && c.passed;
  }
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hybrid VLC/RF federated learning simulator"};
  app.require_subcommand(1);

  CommonFlags run_flags;
  CommonFlags users_flags;
  CommonFlags bw_flags;
  CommonFlags validate_flags;
  vlcfl::ValidationOptions validate_opts;

  auto* run = app.add_subcommand("run", "one experiment at the configured N and bandwidths");
  add_common(run, run_flags, true);
  auto* users = app.add_subcommand("sweep-users", "repeat the experiment over sweep_users");
  add_common(users, users_flags, true);
  auto* bw = app.add_subcommand("sweep-bandwidth", "repeat the experiment over sweep_bandwidths");
  add_common(bw, bw_flags, true);
  auto* check = app.add_subcommand("validate", "exhaustive-search and property self-checks");
  add_common(check, validate_flags, false);
  check->add_option("--instances", validate_opts.instances, "random instances")->capture_default_str();
  check->add_option("--max-users", validate_opts.max_users, "largest instance")->capture_default_str();
  check->add_option("--check-seed", validate_opts.seed, "seed for instance generation")
      ->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return run_experiment_command(run_flags, vlcfl::run_experiment);
    if (*users) return run_experiment_command(users_flags, vlcfl::sweep_users);
    if (*bw) return run_experiment_command(bw_flags, vlcfl::sweep_bandwidth);
    if (*check) return run_validate(validate_flags, validate_opts);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
