#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "vlcfl/types.hpp"

namespace vlcfl {

inline constexpr std::size_t kInputs = 13;
inline constexpr std::size_t kHidden = 10;
inline constexpr std::size_t kParams = kInputs * kHidden + kHidden + kHidden + 1;  // 151

using Features = std::array<double, kInputs>;
using ParamVector = std::array<double, kParams>;

// 13 -> 10 (sigmoid) -> 1 (linear). Parameters live in one flat array so that
// aggregation and finite differences can treat them uniformly:
//   [0, 130)   w1, row-major by input: w1(i, j) connects input i to hidden j
//   [130, 140) b1
//   [140, 150) w2
//   150        b2
struct MlpModel {
  static constexpr std::size_t kB1 = kInputs * kHidden;
  static constexpr std::size_t kW2 = kB1 + kHidden;
  static constexpr std::size_t kB2 = kW2 + kHidden;

  ParamVector params{};

  double& w1(std::size_t i, std::size_t j) { return params[i * kHidden + j]; }
  double w1(std::size_t i, std::size_t j) const { return params[i * kHidden + j]; }
  double& b1(std::size_t j) { return params[kB1 + j]; }
  double b1(std::size_t j) const { return params[kB1 + j]; }
  double& w2(std::size_t j) { return params[kW2 + j]; }
  double w2(std::size_t j) const { return params[kW2 + j]; }
  double& b2() { return params[kB2]; }
  double b2() const { return params[kB2]; }

  friend bool operator==(const MlpModel&, const MlpModel&) = default;
};

/// Every parameter uniform in [-scale, scale], drawn in storage order.
MlpModel init_model(std::uint64_t seed, double scale);

double sigmoid(double z) noexcept;

double forward(const MlpModel& model, const Features& x) noexcept;

struct DataShard {
  std::vector<Features> inputs;
  std::vector<double> targets;
  UserId owner = 0;

  std::size_t size() const noexcept { return targets.size(); }
};

/// J = (1/D) * sum 1/2 (yhat - y)^2 over the shard.
double loss(const MlpModel& model, const DataShard& shard);

/// dJ/dparams by backpropagation, same layout as MlpModel::params.
ParamVector gradient(const MlpModel& model, const DataShard& shard);

/// `epochs` full-batch gradient steps. Throws InvalidArgument on an empty
/// shard or a negative learning rate.
MlpModel local_train(MlpModel model, const DataShard& shard, std::size_t epochs, double lr);

/// D_n / sum(D). Throws InvalidArgument when the total is zero.
std::vector<double> aggregation_weights(std::span<const std::size_t> shard_sizes);

/// Sample-weighted parameter average. Each result is clamped to the range of
/// its inputs so that rounding never leaves the convex hull.
MlpModel aggregate(std::span<const MlpModel> models, std::span<const std::size_t> shard_sizes);

/// 1 - SS_res / SS_tot. Throws InvalidArgument on empty or mismatched input
/// and UndefinedMetric when the truth is constant.
double r_squared(std::span<const double> predictions, std::span<const double> truth);

/// ceil(1 / (1 - theta)) for theta in (0, 1). Quotients within 1e-9 of an
/// integer count as that integer, so theta = 0.9 gives 10 rather than 11.
std::size_t required_global_rounds(double local_accuracy);

}  // namespace vlcfl
