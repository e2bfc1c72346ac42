#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "vlcfl/config.hpp"
#include "vlcfl/mlp.hpp"
#include "vlcfl/usba.hpp"

namespace vlcfl {

// Affine map from the standardized target back to its original units.
struct TargetScale {
  double mean = 0.0;
  double sd = 1.0;
};

struct TrainingReport {
  std::vector<double> round_r2;    // test R^2 after each global round
  std::vector<double> loss_curve;  // sample-weighted training loss after each round
  double final_r2 = 0.0;
  MlpModel model;
};

/// Test-set R^2 on the original target scale.
double evaluate_r2(const MlpModel& model, const DataShard& test, const TargetScale& scale);

/// FedAvg over the selected users. The global model starts from
/// init_model(seed, init_scale); each round every selected user runs
/// local_train from the broadcast model and the server aggregates by shard
/// size. `shards` is looked up by owner id.
///
/// Throws NoParticipants for an empty selection and InvalidArgument when a
/// selected user has no shard.
TrainingReport run_federated_training(const Selection& selection, std::span<const DataShard> shards,
                                      const DataShard& test, const TargetScale& scale,
                                      const FlParams& params, std::uint64_t seed);

}  // namespace vlcfl
