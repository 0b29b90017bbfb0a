#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

namespace ddx {

// Ordered set of distinct condition labels. Position is identity: every
// label index used elsewhere (graphs, datasets, models) refers to this order.
class LabelVocabulary {
 public:
  // Validates: at least 2 labels, no duplicates, no empty strings.
  explicit LabelVocabulary(std::vector<std::string> labels);

  // One UTF-8 label per line.
  static LabelVocabulary load(const std::string& path);
  void save(const std::string& path) const;

  // Auto-named vocabulary ("label_000", ...) for generated datasets.
  static LabelVocabulary synthetic(int size);

  int size() const { return static_cast<int>(labels_.size()); }
  const std::string& label(int i) const;
  const std::vector<std::string>& labels() const { return labels_; }

  bool contains(const std::string& label) const;
  // Throws naming the label when absent.
  int index_of(const std::string& label) const;

  // FNV-1a over the labels in order; ties checkpoints and datasets to the
  // exact vocabulary they were produced with.
  std::uint64_t hash() const;

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, int> index_;
};

}  // namespace ddx
