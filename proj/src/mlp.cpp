#include "vlcfl/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "vlcfl/error.hpp"
#include "vlcfl/random.hpp"

namespace vlcfl {
namespace {

std::array<double, kHidden> hidden_layer(const MlpModel& m, const Features& x) noexcept {
  std::array<double, kHidden> h;
  for (std::size_t j = 0; j < kHidden; ++j) {
    double z = m.b1(j);
    for (std::size_t i = 0; i < kInputs; ++i) z += m.w1(i, j) * x[i];
    h[j] = sigmoid(z);
  }
  return h;
}

double output(const MlpModel& m, const std::array<double, kHidden>& h) noexcept {
  double y = m.b2();
  for (std::size_t j = 0; j < kHidden; ++j) y += m.w2(j) * h[j];
  return y;
}

}  // namespace

MlpModel init_model(std::uint64_t seed, double scale) {
  Rng rng(seed);
  MlpModel m;
  for (auto& p : m.params) p = rng.uniform(-scale, scale);
  return m;
}

double sigmoid(double z) noexcept { return 1.0 / (1.0 + std::exp(-z)); }

double forward(const MlpModel& model, const Features& x) noexcept {
  return output(model, hidden_layer(model, x));
}

double loss(const MlpModel& model, const DataShard& shard) {
  if (shard.size() == 0) throw InvalidArgument("loss of an empty shard");
  double sum = 0.0;
  for (std::size_t s = 0; s < shard.size(); ++s) {
    const double e = forward(model, shard.inputs[s]) - shard.targets[s];
    sum += 0.5 * e * e;
  }
  return sum / static_cast<double>(shard.size());
}

ParamVector gradient(const MlpModel& model, const DataShard& shard) {
  if (shard.size() == 0) throw InvalidArgument("gradient of an empty shard");
  if (shard.inputs.size() != shard.targets.size()) {
    throw InvalidArgument("shard inputs and targets differ in length");
  }
  ParamVector g{};
  const double inv_d = 1.0 / static_cast<double>(shard.size());
  for (std::size_t s = 0; s < shard.size(); ++s) {
    const Features& x = shard.inputs[s];
    const auto h = hidden_layer(model, x);
    const double e = (output(model, h) - shard.targets[s]) * inv_d;

    g[MlpModel::kB2] += e;
    for (std::size_t j = 0; j < kHidden; ++j) {
      g[MlpModel::kW2 + j] += e * h[j];
      const double delta = e * model.w2(j) * h[j] * (1.0 - h[j]);
      g[MlpModel::kB1 + j] += delta;
      for (std::size_t i = 0; i < kInputs; ++i) g[i * kHidden + j] += delta * x[i];
    }
  }
  return g;
}

MlpModel local_train(MlpModel model, const DataShard& shard, std::size_t epochs, double lr) {
  if (shard.size() == 0) throw InvalidArgument("cannot train on an empty shard");
  if (!(lr >= 0.0)) throw InvalidArgument("learning rate must be non-negative");
  for (std::size_t e = 0; e < epochs; ++e) {
    const auto g = gradient(model, shard);
    for (std::size_t k = 0; k < kParams; ++k) model.params[k] -= lr * g[k];
  }
  return model;
}

std::vector<double> aggregation_weights(std::span<const std::size_t> shard_sizes) {
  const std::size_t total = std::accumulate(shard_sizes.begin(), shard_sizes.end(), std::size_t{0});
  if (total == 0) throw InvalidArgument("aggregation over zero samples");
  std::vector<double> w;
  w.reserve(shard_sizes.size());
  for (auto d : shard_sizes) w.push_back(static_cast<double>(d) / static_cast<double>(total));
  return w;
}

MlpModel aggregate(std::span<const MlpModel> models, std::span<const std::size_t> shard_sizes) {
  if (models.empty()) throw InvalidArgument("nothing to aggregate");
  if (models.size() != shard_sizes.size()) {
    throw InvalidArgument("models and shard sizes differ in length");
  }
  const auto w = aggregation_weights(shard_sizes);
  MlpModel out;
  for (std::size_t k = 0; k < kParams; ++k) {
    double acc = 0.0;
    double lo = models[0].params[k];
    double hi = lo;
    for (std::size_t n = 0; n < models.size(); ++n) {
      const double p = models[n].params[k];
      acc += w[n] * p;
      lo = std::min(lo, p);
      hi = std::max(hi, p);
    }
    out.params[k] = std::clamp(acc, lo, hi);
  }
  return out;
}

double r_squared(std::span<const double> predictions, std::span<const double> truth) {
  if (truth.empty()) throw InvalidArgument("R^2 of an empty sample");
  if (predictions.size() != truth.size()) {
    throw InvalidArgument("predictions and truth differ in length");
  }
  const double mean = std::accumulate(truth.begin(), truth.end(), 0.0) / static_cast<double>(truth.size());
  double ss_res = 0.0;
  double ss_tot = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    ss_res += (truth[i] - predictions[i]) * (truth[i] - predictions[i]);
    ss_tot += (truth[i] - mean) * (truth[i] - mean);
  }
  if (ss_tot == 0.0) throw UndefinedMetric("R^2 is undefined for constant truth");
  return 1.0 - ss_res / ss_tot;
}

std::size_t required_global_rounds(double local_accuracy) {
  if (!(local_accuracy > 0.0 && local_accuracy < 1.0)) {
    throw InvalidArgument("local accuracy must lie in (0, 1)");
  }
  const double k = 1.0 / (1.0 - local_accuracy);
  const double nearest = std::round(k);
  if (std::abs(k - nearest) <= 1e-9 * k) return static_cast<std::size_t>(nearest);
  return static_cast<std::size_t>(std::ceil(k));
}

}  // namespace vlcfl
