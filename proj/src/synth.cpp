#include "ddx/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "ddx/error.hpp"
#include "ddx/rng.hpp"

namespace ddx {

namespace {

void check_probs(const std::vector<double>& probs, const char* what,
                 bool must_sum_to_one) {
  if (probs.empty()) throw Error(std::string(what) + " must not be empty");
  double sum = 0.0;
  for (double p : probs) {
    if (p < 0.0 || p > 1.0) throw Error(std::string(what) + " entries must lie in [0,1]");
    sum += p;
  }
  if (must_sum_to_one ? std::abs(sum - 1.0) > 1e-9 : sum > 1.0 + 1e-9) {
    throw Error(std::string(what) + " has an invalid total probability");
  }
}

// Index drawn from a discrete distribution; probabilities are renormalized
// so tiny rounding in the config cannot shift the last bucket.
std::size_t draw_discrete(Rng& rng, const std::vector<double>& probs) {
  double total = std::accumulate(probs.begin(), probs.end(), 0.0);
  double u = rng.uniform() * total;
  double acc = 0.0;
  std::size_t last_nonzero = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] > 0.0) last_nonzero = i;
    acc += probs[i];
    if (u < acc) return i;
  }
  return last_nonzero;
}

// Keep-count from a truncation distribution: 1, 2, 3, or "whole set".
int draw_keep(Rng& rng, const std::vector<double>& mask, int complete_size) {
  double u = rng.uniform();
  double acc = 0.0;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    acc += mask[i];
    if (u < acc) return std::min(static_cast<int>(i) + 1, complete_size);
  }
  return complete_size;
}

// First m elements of a seeded partial Fisher-Yates over the pool.
std::vector<int> draw_subset(Rng& rng, std::vector<int> pool, int m) {
  for (int i = 0; i < m; ++i) {
    std::size_t j = static_cast<std::size_t>(i) +
                    static_cast<std::size_t>(rng.below(pool.size() - static_cast<std::size_t>(i)));
    std::swap(pool[static_cast<std::size_t>(i)], pool[j]);
  }
  pool.resize(static_cast<std::size_t>(m));
  std::sort(pool.begin(), pool.end());
  return pool;
}

}  // namespace

void SynthConfig::validate() const {
  if (label_count < 2) throw Error("synthetic config needs >= 2 labels");
  if (cluster_count < 1 || cluster_count > label_count) {
    throw Error("cluster count must lie in [1, label_count]");
  }
  if (feature_dim < 1) throw Error("feature dimension must be >= 1");
  if (train_n < 1 || test_n < 1) throw Error("sample counts must be >= 1");
  if (noise < 0.0) throw Error("feature noise must be >= 0");
  check_probs(complete_size_probs, "complete-size distribution", true);
  check_probs(train_mask, "train mask distribution", false);
  check_probs(test_mask, "test mask distribution", false);
  if (train_mask.size() > 3 || test_mask.size() > 3) {
    throw Error("mask distributions cover keep-1/2/3 only");
  }
}

SynthResult generate_synthetic(const SynthConfig& cfg) {
  cfg.validate();

  auto vocab = std::make_shared<const LabelVocabulary>(
      LabelVocabulary::synthetic(cfg.label_count));

  // Balanced contiguous blocks of the label range.
  ClusterSet groups;
  groups.label_count = cfg.label_count;
  {
    int base = cfg.label_count / cfg.cluster_count;
    int extra = cfg.label_count % cfg.cluster_count;
    int next = 0;
    for (int k = 0; k < cfg.cluster_count; ++k) {
      int size = base + (k < extra ? 1 : 0);
      std::vector<int> members(static_cast<std::size_t>(size));
      std::iota(members.begin(), members.end(), next);
      next += size;
      groups.clusters.push_back(std::move(members));
    }
  }
  groups.validate();

  Rng rng(cfg.seed);
  Matrix prototypes(cfg.cluster_count, cfg.feature_dim);
  for (Eigen::Index i = 0; i < prototypes.rows(); ++i) {
    for (Eigen::Index j = 0; j < prototypes.cols(); ++j) {
      prototypes(i, j) = rng.normal();
    }
  }

  auto make_split = [&](int count, const char* prefix,
                        const std::vector<double>& mask, DatasetRole role) {
    std::vector<Sample> masked, complete;
    masked.reserve(static_cast<std::size_t>(count));
    complete.reserve(static_cast<std::size_t>(count));
    char id[32];
    for (int s = 0; s < count; ++s) {
      int k = static_cast<int>(rng.below(static_cast<std::uint64_t>(cfg.cluster_count)));
      const auto& members = groups.clusters[static_cast<std::size_t>(k)];

      int size = std::min(static_cast<int>(draw_discrete(rng, cfg.complete_size_probs)) + 1,
                          static_cast<int>(members.size()));
      std::vector<int> full = draw_subset(rng, members, size);

      Vector features(cfg.feature_dim);
      for (int j = 0; j < cfg.feature_dim; ++j) {
        features(j) = prototypes(k, j) + cfg.noise * rng.normal();
      }

      int keep = draw_keep(rng, mask, size);
      std::vector<int> kept = keep >= size ? full : draw_subset(rng, full, keep);

      std::snprintf(id, sizeof(id), "%s%06d", prefix, s);
      masked.push_back(Sample{id, features, std::move(kept)});
      complete.push_back(Sample{id, features, std::move(full)});
    }
    return std::pair(Dataset(vocab, std::move(masked), role),
                     Dataset(vocab, std::move(complete), role));
  };

  auto [train, train_complete] =
      make_split(cfg.train_n, "train_", cfg.train_mask, DatasetRole::Train);
  auto [test, test_complete] =
      make_split(cfg.test_n, "test_", cfg.test_mask, DatasetRole::Test);

  return SynthResult{vocab,
                     std::move(train),
                     std::move(test),
                     std::move(train_complete),
                     std::move(test_complete),
                     std::move(groups)};
}

}  // namespace ddx
