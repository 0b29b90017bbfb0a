#include "ddx/vocab.hpp"

#include <cstdio>
#include <unordered_set>

#include "ddx/error.hpp"
#include "io_util.hpp"

namespace ddx {

LabelVocabulary::LabelVocabulary(std::vector<std::string> labels)
    : labels_(std::move(labels)) {
  if (labels_.size() < 2) throw Error("vocabulary needs at least 2 labels");
  index_.reserve(labels_.size());
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i].empty()) throw Error("vocabulary contains an empty label");
    auto [_, inserted] = index_.emplace(labels_[i], static_cast<int>(i));
    if (!inserted) throw Error("duplicate vocabulary label: " + labels_[i]);
  }
}

LabelVocabulary LabelVocabulary::load(const std::string& path) {
  auto in = detail::open_input(path);
  std::vector<std::string> labels;
  std::string line;
  while (detail::getline_norm(in, line)) {
    if (line.empty()) continue;
    labels.push_back(line);
  }
  if (labels.empty()) throw Error("vocabulary file is empty: " + path);
  return LabelVocabulary(std::move(labels));
}

void LabelVocabulary::save(const std::string& path) const {
  auto out = detail::open_output(path);
  for (const auto& l : labels_) out << l << '\n';
  detail::finish_output(out, path);
}

LabelVocabulary LabelVocabulary::synthetic(int size) {
  if (size < 2) throw Error("synthetic vocabulary needs size >= 2");
  std::vector<std::string> labels;
  labels.reserve(static_cast<std::size_t>(size));
  char buf[24];
  for (int i = 0; i < size; ++i) {
    std::snprintf(buf, sizeof(buf), "label_%03d", i);
    labels.emplace_back(buf);
  }
  return LabelVocabulary(std::move(labels));
}

const std::string& LabelVocabulary::label(int i) const {
  if (i < 0 || i >= size()) throw Error("label index out of range");
  return labels_[static_cast<std::size_t>(i)];
}

bool LabelVocabulary::contains(const std::string& label) const {
  return index_.find(label) != index_.end();
}

int LabelVocabulary::index_of(const std::string& label) const {
  auto it = index_.find(label);
  if (it == index_.end()) throw Error("unknown label: " + label);
  return it->second;
}

std::uint64_t LabelVocabulary::hash() const {
  std::uint64_t h = 1469598103934665603ull;
  for (const auto& l : labels_) {
    h = detail::fnv1a64(l, h);
    h = detail::fnv1a64("\n", h);
  }
  return h;
}

}  // namespace ddx
