#include "vlcfl/federated.hpp"

#include <unordered_map>

#include "vlcfl/error.hpp"

namespace vlcfl {

double evaluate_r2(const MlpModel& model, const DataShard& test, const TargetScale& scale) {
  std::vector<double> pred;
  std::vector<double> truth;
  pred.reserve(test.size());
  truth.reserve(test.size());
  for (std::size_t i = 0; i < test.size(); ++i) {
    pred.push_back(forward(model, test.inputs[i]) * scale.sd + scale.mean);
    truth.push_back(test.targets[i] * scale.sd + scale.mean);
  }
  return r_squared(pred, truth);
}

TrainingReport run_federated_training(const Selection& selection, std::span<const DataShard> shards,
                                      const DataShard& test, const TargetScale& scale,
                                      const FlParams& params, std::uint64_t seed) {
  if (selection.empty()) throw NoParticipants("federated training needs at least one user");

  std::unordered_map<UserId, const DataShard*> by_owner;
  for (const auto& s : shards) by_owner.emplace(s.owner, &s);

  std::vector<const DataShard*> mine;
  std::vector<std::size_t> sizes;
  for (UserId id : selection.all()) {
    auto it = by_owner.find(id);
    if (it == by_owner.end()) {
      throw InvalidArgument("selected user " + std::to_string(id) + " has no data shard");
    }
    if (it->second->size() == 0) {
      throw InvalidArgument("selected user " + std::to_string(id) + " has an empty shard");
    }
    mine.push_back(it->second);
    sizes.push_back(it->second->size());
  }
  const auto weights = aggregation_weights(sizes);

  TrainingReport report;
  report.model = init_model(seed, params.init_scale);
  report.round_r2.reserve(params.global_rounds);
  report.loss_curve.reserve(params.global_rounds);

  std::vector<MlpModel> local(mine.size());
  for (std::size_t round = 0; round < params.global_rounds; ++round) {
    for (std::size_t n = 0; n < mine.size(); ++n) {
      local[n] = local_train(report.model, *mine[n], params.local_epochs, params.learning_rate);
    }
    report.model = aggregate(local, sizes);

    double train_loss = 0.0;
    for (std::size_t n = 0; n < mine.size(); ++n) train_loss += weights[n] * loss(report.model, *mine[n]);
    report.loss_curve.push_back(train_loss);
    report.round_r2.push_back(evaluate_r2(report.model, test, scale));
  }
  report.final_r2 = report.round_r2.empty() ? evaluate_r2(report.model, test, scale)
                                            : report.round_r2.back();
  return report;
}

}  // namespace vlcfl
