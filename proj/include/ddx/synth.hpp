#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "ddx/clusters.hpp"
#include "ddx/dataset.hpp"

namespace ddx {

// Synthetic benchmark reproducing the incomplete-label regime: labels are
// partitioned into planted differential groups, each sample carries a
// complete label set drawn inside one group, and the stored annotation is a
// truncated subset of it.
struct SynthConfig {
  int label_count = 40;
  int cluster_count = 8;
  int feature_dim = 64;
  int train_n = 5000;
  int test_n = 1000;
  double noise = 0.25;  // isotropic feature noise around the cluster prototype

  // P(complete set has size k) = complete_size_probs[k-1]; clamped to the
  // cluster size. Must sum to 1.
  std::vector<double> complete_size_probs = {0.0, 0.2, 0.4, 0.4};

  // P(keep 1), P(keep 2), P(keep 3); the remainder keeps the whole set.
  std::vector<double> train_mask = {0.817, 0.155, 0.028};
  std::vector<double> test_mask = {0.460, 0.381, 0.127};

  std::uint64_t seed = 0;

  void validate() const;
};

struct SynthResult {
  std::shared_ptr<const LabelVocabulary> vocab;
  Dataset train;           // truncated labels
  Dataset test;            // truncated labels
  Dataset train_complete;  // same samples before truncation
  Dataset test_complete;
  ClusterSet true_groups;  // planted partition, for agreement checks
};

SynthResult generate_synthetic(const SynthConfig& cfg);

}  // namespace ddx
