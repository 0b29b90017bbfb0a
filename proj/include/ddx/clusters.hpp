#pragma once

#include <string>
#include <vector>

#include "ddx/vocab.hpp"

namespace ddx {

// Disjoint partition of the label indices, ordered by smallest member.
struct ClusterSet {
  std::vector<std::vector<int>> clusters;  // each sorted ascending
  int label_count = 0;
  double threshold = 0.0;  // extraction threshold; 0 for planted partitions

  int cluster_of(int label) const;  // -1 when out of range
  void validate() const;            // disjoint + union covers [0, C)

  // One line per cluster: "cluster_id<TAB>label1;label2;...".
  void save(const std::string& path, const LabelVocabulary& vocab) const;
  static ClusterSet load(const std::string& path, const LabelVocabulary& vocab);
};

}  // namespace ddx
