#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "vlcfl/config.hpp"
#include "vlcfl/topology.hpp"

namespace vlcfl {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::size_t cases = 0;
  std::string detail;
};

struct ValidationOptions {
  std::size_t instances = 100;
  std::size_t max_users = 12;  // keeps the exhaustive search cheap
  std::uint64_t seed = 1;
};

struct Instance {
  SimConfig config;
  Topology topology;
};

/// A small random scenario around `base`: user count, indoor share, shard
/// size and round deadline are drawn so that some instances are tight and
/// some loose.
Instance random_instance(const SimConfig& base, std::size_t max_users, std::uint64_t seed);

/// Runtime self-checks: RB budget exactness, fixed points, agreement with
/// the exhaustive search, monotone selection and the backprop gradient.
std::vector<CheckResult> run_validation(const SimConfig& base, const ValidationOptions& options);

}  // namespace vlcfl
