#include "ddx/train.hpp"

#include <cmath>
#include <numeric>

#include "ddx/error.hpp"
#include "ddx/rng.hpp"

namespace ddx {

namespace {

// Seed-derived batch order: one shuffle per epoch off a single stream.
std::vector<int> epoch_order(Rng& rng, int n) {
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  rng.shuffle(order);
  return order;
}

Matrix gather_rows(const Matrix& source, const std::vector<int>& order,
                   int begin, int count) {
  Matrix out(count, source.cols());
  for (int r = 0; r < count; ++r) {
    out.row(r) = source.row(order[static_cast<std::size_t>(begin + r)]);
  }
  return out;
}

IntMatrix gather_rows(const IntMatrix& source, const std::vector<int>& order,
                      int begin, int count) {
  IntMatrix out(count, source.cols());
  for (int r = 0; r < count; ++r) {
    out.row(r) = source.row(order[static_cast<std::size_t>(begin + r)]);
  }
  return out;
}

void check_loss(double loss, int epoch) {
  if (!std::isfinite(loss)) {
    throw Error("training diverged: non-finite loss at epoch " +
                std::to_string(epoch));
  }
}

}  // namespace

double TrainConfig::effective_lr(int epoch) const {
  if (schedule == LrSchedule::Constant) return learning_rate;
  return learning_rate * std::pow(step_factor, epoch / step_every);
}

void TrainConfig::validate() const {
  if (learning_rate <= 0.0) throw Error("learning rate must be positive");
  if (epochs < 1) throw Error("epochs must be >= 1");
  if (batch_size < 1) throw Error("batch size must be >= 1");
  if (weight_decay < 0.0) throw Error("weight decay must be >= 0");
  if (schedule == LrSchedule::Step && (step_factor <= 0.0 || step_every < 1)) {
    throw Error("step schedule needs factor > 0 and interval >= 1");
  }
}

TrainHistory train(GcnModel& model, const Dataset& dataset,
                   const PropagationMatrix& p1, const PropagationMatrix& p2,
                   const TrainConfig& config) {
  config.validate();
  model.validate();
  if (dataset.label_count() != model.label_count) {
    throw Error("dataset labels do not match the model");
  }
  if (dataset.vocab().hash() != model.vocab_hash) {
    throw Error("dataset vocabulary does not match the model checkpoint");
  }
  if (dataset.feature_dim() != model.config.feature_dim) {
    throw Error("dataset feature dimension does not match the model");
  }

  const Matrix features = dataset.feature_matrix();
  const IntMatrix targets = label_matrix(dataset);
  const int n = dataset.size();

  Rng rng(config.seed);
  TrainHistory history;
  history.epoch_loss.reserve(static_cast<std::size_t>(config.epochs));

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    const double lr = config.effective_lr(epoch);
    const auto order = epoch_order(rng, n);
    double loss_sum = 0.0;
    for (int begin = 0; begin < n; begin += config.batch_size) {
      const int count = std::min(config.batch_size, n - begin);
      Matrix x = gather_rows(features, order, begin, count);
      IntMatrix y = gather_rows(targets, order, begin, count);
      auto [loss, grads] = gcn_backward(model, p1, p2, x, y);
      check_loss(loss, epoch);
      loss_sum += loss * count;

      if (config.weight_decay > 0.0) {
        grads.embeddings += config.weight_decay * model.embeddings;
        grads.w1 += config.weight_decay * model.w1;
        grads.w2 += config.weight_decay * model.w2;
        if (model.config.use_adapter) {
          grads.adapter_weight += config.weight_decay * model.adapter_weight;
        }
      }
      model.embeddings -= lr * grads.embeddings;
      model.w1 -= lr * grads.w1;
      model.w2 -= lr * grads.w2;
      if (model.config.use_adapter) {
        model.adapter_weight -= lr * grads.adapter_weight;
        model.adapter_bias -= lr * grads.adapter_bias;
      }
    }
    history.epoch_loss.push_back(loss_sum / n);
  }
  return history;
}

TrainHistory train_linear_baseline(LinearBaseline& model, const Dataset& dataset,
                                   const TrainConfig& config) {
  config.validate();
  model.validate();
  if (dataset.label_count() != model.label_count) {
    throw Error("dataset labels do not match the baseline");
  }
  if (dataset.vocab().hash() != model.vocab_hash) {
    throw Error("dataset vocabulary does not match the model checkpoint");
  }
  if (dataset.feature_dim() != model.feature_dim) {
    throw Error("dataset feature dimension does not match the baseline");
  }

  const Matrix features = dataset.feature_matrix();
  const IntMatrix targets = label_matrix(dataset);
  const int n = dataset.size();

  Rng rng(config.seed);
  TrainHistory history;
  history.epoch_loss.reserve(static_cast<std::size_t>(config.epochs));

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    const double lr = config.effective_lr(epoch);
    const auto order = epoch_order(rng, n);
    double loss_sum = 0.0;
    for (int begin = 0; begin < n; begin += config.batch_size) {
      const int count = std::min(config.batch_size, n - begin);
      Matrix x = gather_rows(features, order, begin, count);
      IntMatrix y = gather_rows(targets, order, begin, count);
      auto [loss, grads] = linear_backward(model, x, y);
      check_loss(loss, epoch);
      loss_sum += loss * count;

      if (config.weight_decay > 0.0) {
        grads.weight += config.weight_decay * model.weight;
      }
      model.weight -= lr * grads.weight;
      model.bias -= lr * grads.bias;
    }
    history.epoch_loss.push_back(loss_sum / n);
  }
  return history;
}

}  // namespace ddx
