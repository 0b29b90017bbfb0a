#pragma once

#include <cstdint>
#include <vector>

#include "ddx/dataset.hpp"
#include "ddx/model.hpp"

namespace ddx {

enum class LrSchedule { Constant, Step };

struct TrainConfig {
  double learning_rate = 0.0003;
  int epochs = 300;
  int batch_size = 32;
  std::uint64_t seed = 0;
  double weight_decay = 0.0;  // applied to weight matrices, not biases
  LrSchedule schedule = LrSchedule::Constant;
  double step_factor = 0.1;  // lr multiplier every step_every epochs
  int step_every = 100;

  double effective_lr(int epoch) const;  // epoch is 0-based
  void validate() const;
};

struct TrainHistory {
  std::vector<double> epoch_loss;  // sample-weighted mean per epoch
};

// Mini-batch gradient descent with a deterministic batch order derived from
// the seed. Throws naming the epoch if the loss goes non-finite.
TrainHistory train(GcnModel& model, const Dataset& dataset,
                   const PropagationMatrix& p1, const PropagationMatrix& p2,
                   const TrainConfig& config);

TrainHistory train_linear_baseline(LinearBaseline& model,
                                   const Dataset& dataset,
                                   const TrainConfig& config);

}  // namespace ddx
