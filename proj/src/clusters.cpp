#include "ddx/clusters.hpp"

#include <algorithm>

#include "ddx/error.hpp"
#include "io_util.hpp"

namespace ddx {

int ClusterSet::cluster_of(int label) const {
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    const auto& cl = clusters[c];
    if (std::binary_search(cl.begin(), cl.end(), label)) return static_cast<int>(c);
  }
  return -1;
}

void ClusterSet::validate() const {
  std::vector<int> seen(static_cast<std::size_t>(label_count), 0);
  for (const auto& cl : clusters) {
    if (cl.empty()) throw Error("cluster set contains an empty cluster");
    if (!std::is_sorted(cl.begin(), cl.end())) throw Error("cluster members not sorted");
    for (int l : cl) {
      if (l < 0 || l >= label_count) throw Error("cluster member out of range");
      if (seen[static_cast<std::size_t>(l)]++) throw Error("clusters overlap");
    }
  }
  for (int l = 0; l < label_count; ++l) {
    if (!seen[static_cast<std::size_t>(l)]) {
      throw Error("label " + std::to_string(l) + " missing from cluster set");
    }
  }
}

void ClusterSet::save(const std::string& path, const LabelVocabulary& vocab) const {
  validate();
  if (vocab.size() != label_count) throw Error("cluster set / vocabulary size mismatch");
  auto out = detail::open_output(path);
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    out << c << '\t';
    for (std::size_t k = 0; k < clusters[c].size(); ++k) {
      if (k > 0) out << ';';
      out << vocab.label(clusters[c][k]);
    }
    out << '\n';
  }
  detail::finish_output(out, path);
}

ClusterSet ClusterSet::load(const std::string& path, const LabelVocabulary& vocab) {
  auto in = detail::open_input(path);
  ClusterSet set;
  set.label_count = vocab.size();
  std::string line;
  int line_no = 0;
  while (detail::getline_norm(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::string where = path + ":" + std::to_string(line_no);
    auto parts = detail::split(line, '\t');
    if (parts.size() != 2) throw Error(where + ": expected 'id<TAB>members'");
    std::vector<int> members;
    for (const auto& name : detail::split(parts[1], ';')) {
      members.push_back(vocab.index_of(name));
    }
    std::sort(members.begin(), members.end());
    set.clusters.push_back(std::move(members));
  }
  set.validate();
  return set;
}

}  // namespace ddx
