#pragma once

#include <memory>
#include <string>
#include <vector>

#include "ddx/types.hpp"
#include "ddx/vocab.hpp"

namespace ddx {

// One observation: a precomputed feature vector plus a nonempty set of
// ground-truth label indices (possibly an incomplete subset of the truth).
struct Sample {
  std::string id;
  Vector features;
  std::vector<int> labels;  // sorted, unique, each in [0, C)
};

enum class DatasetRole { Train, Test };

class Dataset {
 public:
  // Validates: nonempty, consistent feature width, label indices in range,
  // labels nonempty per sample.
  Dataset(std::shared_ptr<const LabelVocabulary> vocab,
          std::vector<Sample> samples, DatasetRole role);

  // One JSON record per line: {"id": ..., "features": [...], "labels": [...]}
  // with labels as vocabulary strings. Floats round-trip bit-exactly.
  static Dataset load(const std::string& path,
                      std::shared_ptr<const LabelVocabulary> vocab,
                      DatasetRole role = DatasetRole::Train);
  void save(const std::string& path) const;

  int size() const { return static_cast<int>(samples_.size()); }
  int feature_dim() const;
  int label_count() const { return vocab_->size(); }
  DatasetRole role() const { return role_; }

  const Sample& sample(int i) const { return samples_[static_cast<std::size_t>(i)]; }
  const std::vector<Sample>& samples() const { return samples_; }

  const LabelVocabulary& vocab() const { return *vocab_; }
  std::shared_ptr<const LabelVocabulary> vocab_ptr() const { return vocab_; }

  // n x d, one row per sample.
  Matrix feature_matrix() const;

  // Label index sets, for graph construction.
  std::vector<std::vector<int>> label_sets() const;

 private:
  std::shared_ptr<const LabelVocabulary> vocab_;
  std::vector<Sample> samples_;
  DatasetRole role_;
};

// n x C binary indicator matrix of the ground truth.
IntMatrix label_matrix(const Dataset& dataset);

// Stand-in for external sentence embeddings: C rows x dim columns of
// tab-separated decimals, row order = vocabulary order.
Matrix load_embeddings(const std::string& path, int label_count, int dim);
void save_embeddings(const Matrix& embeddings, const std::string& path);

// Plain numeric TSV without header (scores, exported matrices).
Matrix load_matrix_tsv(const std::string& path);

}  // namespace ddx
