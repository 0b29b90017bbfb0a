#include "ddx/dataset.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "ddx/error.hpp"
#include "io_util.hpp"

namespace ddx {

Dataset::Dataset(std::shared_ptr<const LabelVocabulary> vocab,
                 std::vector<Sample> samples, DatasetRole role)
    : vocab_(std::move(vocab)), samples_(std::move(samples)), role_(role) {
  if (!vocab_) throw Error("dataset needs a vocabulary");
  if (samples_.empty()) throw Error("dataset is empty");
  const auto dim = samples_.front().features.size();
  for (auto& s : samples_) {
    if (s.features.size() != dim) {
      throw Error("sample '" + s.id + "' has inconsistent feature length");
    }
    if (!s.features.allFinite()) {
      throw Error("sample '" + s.id + "' has non-finite features");
    }
    if (s.labels.empty()) throw Error("sample '" + s.id + "' has no labels");
    std::sort(s.labels.begin(), s.labels.end());
    s.labels.erase(std::unique(s.labels.begin(), s.labels.end()), s.labels.end());
    for (int l : s.labels) {
      if (l < 0 || l >= vocab_->size()) {
        throw Error("sample '" + s.id + "' has a label index out of range");
      }
    }
  }
}

int Dataset::feature_dim() const {
  return static_cast<int>(samples_.front().features.size());
}

Matrix Dataset::feature_matrix() const {
  Matrix m(size(), feature_dim());
  for (int i = 0; i < size(); ++i) m.row(i) = samples_[static_cast<std::size_t>(i)].features;
  return m;
}

std::vector<std::vector<int>> Dataset::label_sets() const {
  std::vector<std::vector<int>> sets;
  sets.reserve(samples_.size());
  for (const auto& s : samples_) sets.push_back(s.labels);
  return sets;
}

Dataset Dataset::load(const std::string& path,
                      std::shared_ptr<const LabelVocabulary> vocab,
                      DatasetRole role) {
  if (!vocab) throw Error("dataset needs a vocabulary");
  auto in = detail::open_input(path);
  std::vector<Sample> samples;
  std::string line;
  int line_no = 0;
  while (detail::getline_norm(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::string where = path + ":" + std::to_string(line_no);
    nlohmann::json rec;
    try {
      rec = nlohmann::json::parse(line);
    } catch (const std::exception& e) {
      throw Error(where + ": malformed record: " + e.what());
    }
    if (!rec.is_object() || !rec.contains("id") || !rec.contains("features") ||
        !rec.contains("labels")) {
      throw Error(where + ": record needs id, features and labels");
    }
    Sample s;
    s.id = rec["id"].get<std::string>();
    const auto& feats = rec["features"];
    if (!feats.is_array()) throw Error(where + ": features must be an array");
    s.features.resize(static_cast<Eigen::Index>(feats.size()));
    Eigen::Index k = 0;
    for (const auto& v : feats) {
      if (!v.is_number()) throw Error(where + ": non-numeric feature");
      s.features(k++) = v.get<double>();
    }
    const auto& labels = rec["labels"];
    if (!labels.is_array() || labels.empty()) {
      throw Error(where + ": labels must be a nonempty array");
    }
    for (const auto& l : labels) {
      const std::string name = l.get<std::string>();
      if (!vocab->contains(name)) throw Error(where + ": unknown label: " + name);
      s.labels.push_back(vocab->index_of(name));
    }
    samples.push_back(std::move(s));
  }
  if (samples.empty()) throw Error("dataset file has no records: " + path);
  return Dataset(std::move(vocab), std::move(samples), role);
}

void Dataset::save(const std::string& path) const {
  auto out = detail::open_output(path);
  for (const auto& s : samples_) {
    out << "{\"id\":" << nlohmann::json(s.id).dump() << ",\"features\":[";
    for (Eigen::Index k = 0; k < s.features.size(); ++k) {
      if (k > 0) out << ',';
      out << detail::format_double(s.features(k));
    }
    out << "],\"labels\":[";
    for (std::size_t k = 0; k < s.labels.size(); ++k) {
      if (k > 0) out << ',';
      out << nlohmann::json(vocab_->label(s.labels[k])).dump();
    }
    out << "]}\n";
  }
  detail::finish_output(out, path);
}

IntMatrix label_matrix(const Dataset& dataset) {
  IntMatrix m = IntMatrix::Zero(dataset.size(), dataset.label_count());
  for (int i = 0; i < dataset.size(); ++i) {
    for (int l : dataset.sample(i).labels) m(i, l) = 1;
  }
  return m;
}

Matrix load_matrix_tsv(const std::string& path) {
  auto in = detail::open_input(path);
  std::vector<std::vector<double>> rows;
  std::string line;
  int line_no = 0;
  while (detail::getline_norm(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::string where = path + ":" + std::to_string(line_no);
    auto parts = detail::split(line, '\t');
    std::vector<double> row;
    row.reserve(parts.size());
    for (const auto& p : parts) row.push_back(detail::parse_double(p, where));
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw Error(where + ": ragged row");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw Error("matrix file has no rows: " + path);
  Matrix m(static_cast<Eigen::Index>(rows.size()),
           static_cast<Eigen::Index>(rows.front().size()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
  }
  return m;
}

Matrix load_embeddings(const std::string& path, int label_count, int dim) {
  Matrix m = load_matrix_tsv(path);
  if (m.rows() != label_count || m.cols() != dim) {
    throw Error("embedding file " + path + " is " + std::to_string(m.rows()) +
                "x" + std::to_string(m.cols()) + ", expected " +
                std::to_string(label_count) + "x" + std::to_string(dim));
  }
  return m;
}

void save_embeddings(const Matrix& embeddings, const std::string& path) {
  auto out = detail::open_output(path);
  for (Eigen::Index i = 0; i < embeddings.rows(); ++i) {
    for (Eigen::Index j = 0; j < embeddings.cols(); ++j) {
      if (j > 0) out << '\t';
      out << detail::format_double(embeddings(i, j));
    }
    out << '\n';
  }
  detail::finish_output(out, path);
}

}  // namespace ddx
