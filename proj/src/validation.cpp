#include "vlcfl/validation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "vlcfl/mlp.hpp"
#include "vlcfl/random.hpp"
#include "vlcfl/usba.hpp"

namespace vlcfl {
namespace {

bool within_ulp(double a, double b) {
  return a == b || std::nextafter(a, b) == b;
}

CheckResult budget_check(const SimConfig& config, std::size_t cases, Rng& rng) {
  CheckResult c{"rb budget exactness", true, cases, {}};
  for (std::size_t i = 0; i < cases && c.passed; ++i) {
    Selection s;
    const auto n_in = rng.index(60);
    const auto n_out = rng.index(60) + (n_in == 0 ? 1 : 0);
    for (std::size_t k = 0; k < n_in; ++k) s.indoor.push_back(static_cast<UserId>(k));
    for (std::size_t k = 0; k < n_out; ++k) s.outdoor.push_back(static_cast<UserId>(n_in + k));
    const auto bw = get_b(s, config, LinkMode::Hybrid);
    const double rf_used = static_cast<double>(s.size() + n_out) * bw.b_up;
    const double vlc_used = n_in == 0 ? bw.b_vlc : static_cast<double>(n_in) * bw.b_vlc;
    if (!within_ulp(rf_used, config.rf.total_bandwidth_hz) ||
        !within_ulp(vlc_used, config.vlc.total_bandwidth_hz) || bw.b_up != bw.b_down) {
      c.passed = false;
      c.detail = "|S1|=" + std::to_string(n_in) + " |S2|=" + std::to_string(n_out);
    }
  }
  return c;
}

ParamVector numeric_gradient(const MlpModel& m, const DataShard& shard, double h) {
  ParamVector g{};
  for (std::size_t k = 0; k < kParams; ++k) {
    MlpModel plus = m;
    MlpModel minus = m;
    plus.params[k] += h;
    minus.params[k] -= h;
    g[k] = (loss(plus, shard) - loss(minus, shard)) / (2.0 * h);
  }
  return g;
}

CheckResult gradient_check(std::size_t cases, Rng& rng) {
  CheckResult c{"backprop gradient", true, cases, {}};
  double worst = 0.0;
  for (std::size_t i = 0; i < cases; ++i) {
    const auto m = init_model(rng.index(1u << 30), 0.5);
    DataShard shard;
    for (std::size_t s = 0; s < 1 + rng.index(5); ++s) {
      Features x;
      for (auto& v : x) v = rng.normal();
      shard.inputs.push_back(x);
      shard.targets.push_back(rng.normal());
    }
    const auto a = gradient(m, shard);
    const auto n = numeric_gradient(m, shard, 1e-5);
    double diff = 0.0;
    double scale = 0.0;
    for (std::size_t k = 0; k < kParams; ++k) {
      diff += (a[k] - n[k]) * (a[k] - n[k]);
      scale += a[k] * a[k];
    }
    const double rel = std::sqrt(diff) / std::max(std::sqrt(scale), 1e-12);
    worst = std::max(worst, rel);
  }
  c.passed = worst <= 1e-4;
  std::ostringstream os;
  os << "worst relative error " << worst;
  c.detail = os.str();
  return c;
}

}  // namespace

Instance random_instance(const SimConfig& base, std::size_t max_users, std::uint64_t seed) {
  Rng rng(derive_seed(seed, 11));
  Instance inst;
  inst.config = base;
  auto& t = inst.config.topology;
  t.n_users = 2 + rng.index(std::max<std::size_t>(max_users, 2) - 1);
  t.indoor_fraction = rng.uniform();
  t.shard_size = 4 + rng.index(21);
  inst.config.system.t_round_s = rng.uniform(0.5, 4.0);
  inst.topology = generate_topology(t, derive_seed(seed, 12));
  return inst;
}

std::vector<CheckResult> run_validation(const SimConfig& base, const ValidationOptions& options) {
  validate(base);
  Rng rng(options.seed);
  std::vector<CheckResult> out;
  out.push_back(budget_check(base, options.instances * 10, rng));

  CheckResult fixed{"fixed point of converged runs", true, 0, {}};
  CheckResult oracle{"agreement with exhaustive search", true, 0, {}};
  CheckResult monotone{"monotone selection", true, 0, {}};
  std::size_t cycled = 0;
  for (std::size_t i = 0; i < options.instances; ++i) {
    const auto inst = random_instance(base, options.max_users, derive_seed(options.seed, 100 + i));
    for (auto mode : {LinkMode::Hybrid, LinkMode::RfOnly}) {
      const auto r = usba(inst.topology, inst.config, mode);
      const auto best = oracle_enumerate(inst.topology, inst.config, mode);
      ++oracle.cases;
      if (r.converged) {
        ++fixed.cases;
        const bool ok = r.selection.empty() ||
                        r.selection == get_s(get_b(r.selection, inst.config, mode), inst.topology,
                                             inst.config, mode);
        if (!ok && fixed.passed) {
          fixed.passed = false;
          fixed.detail = "instance " + std::to_string(i);
        }
        if (r.objective != best.objective && oracle.passed) {
          oracle.passed = false;
          oracle.detail = "instance " + std::to_string(i) + ": " + std::to_string(r.objective) +
                          " vs " + std::to_string(best.objective);
        }
      } else {
        ++cycled;
        if (r.objective > best.objective && oracle.passed) {
          oracle.passed = false;
          oracle.detail = "cycled instance " + std::to_string(i) + " beats the exhaustive search";
        }
      }
    }

    const auto lo = initial_bandwidth(inst.topology, inst.config, LinkMode::Hybrid);
    BandwidthAllocation hi = lo;
    hi.b_up *= 1.0 + rng.uniform() * 4.0;
    hi.b_down = hi.b_up;
    hi.b_vlc *= 1.0 + rng.uniform() * 4.0;
    ++monotone.cases;
    if (!is_subset(get_s(lo, inst.topology, inst.config), get_s(hi, inst.topology, inst.config)) &&
        monotone.passed) {
      monotone.passed = false;
      monotone.detail = "instance " + std::to_string(i);
    }
  }
  if (oracle.passed) oracle.detail = std::to_string(cycled) + " cycled runs, all within the optimum";
  out.push_back(fixed);
  out.push_back(oracle);
  out.push_back(monotone);
  out.push_back(gradient_check(options.instances, rng));
  return out;
}

}  // namespace vlcfl
