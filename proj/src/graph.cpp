#include "ddx/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "ddx/error.hpp"
#include "ddx/rng.hpp"
#include "io_util.hpp"

namespace ddx {

namespace {

const char* source_name(GraphSource s) {
  switch (s) {
    case GraphSource::Cooccurrence: return "cooccurrence";
    case GraphSource::Knowledge: return "knowledge";
    case GraphSource::Random: return "random";
  }
  throw Error("unreachable graph source");
}

GraphSource source_from(const std::string& name) {
  if (name == "cooccurrence") return GraphSource::Cooccurrence;
  if (name == "knowledge") return GraphSource::Knowledge;
  if (name == "random") return GraphSource::Random;
  throw Error("unknown graph source: " + name);
}

IntMatrix zero_edges(int size) { return IntMatrix::Zero(size, size); }

// Symmetric co-grouping relation of one annotator: 1 wherever some group
// holds both labels.
IntMatrix cogrouping(const DifferentialGroups& g, const LabelVocabulary& vocab) {
  IntMatrix rel = zero_edges(vocab.size());
  for (const auto& group : g.groups) {
    std::vector<int> idx;
    idx.reserve(group.members.size());
    for (const auto& m : group.members) idx.push_back(vocab.index_of(m));
    for (std::size_t a = 0; a < idx.size(); ++a) {
      for (std::size_t b = a + 1; b < idx.size(); ++b) {
        rel(idx[a], idx[b]) = 1;
        rel(idx[b], idx[a]) = 1;
      }
    }
  }
  return rel;
}

}  // namespace

void DifferentialGroups::validate(const LabelVocabulary& vocab) const {
  for (const auto& group : groups) {
    if (group.members.size() < 2) {
      throw Error("group " + std::to_string(group.id) + " of annotator '" +
                  annotator_id + "' has fewer than 2 members");
    }
    std::unordered_set<std::string> seen;
    for (const auto& m : group.members) {
      vocab.index_of(m);  // throws naming an unknown label
      if (!seen.insert(m).second) {
        throw Error("group " + std::to_string(group.id) +
                    " lists member twice: " + m);
      }
    }
  }
}

DifferentialGroups DifferentialGroups::load(const std::string& path,
                                            const LabelVocabulary& vocab,
                                            const std::string& annotator) {
  auto in = detail::open_input(path);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const std::exception& e) {
    throw Error("malformed groups file " + path + ": " + e.what());
  }
  if (!doc.contains("annotators") || !doc["annotators"].is_object()) {
    throw Error("groups file " + path + " lacks an \"annotators\" object");
  }
  const auto& annotators = doc["annotators"];

  std::string id = annotator;
  if (id.empty()) {
    if (annotators.size() != 1) {
      std::string ids;
      for (auto it = annotators.begin(); it != annotators.end(); ++it) {
        if (!ids.empty()) ids += ", ";
        ids += it.key();
      }
      throw Error("groups file " + path +
                  " holds several annotators (" + ids +
                  "); pick one explicitly");
    }
    id = annotators.begin().key();
  } else if (!annotators.contains(id)) {
    throw Error("groups file " + path + " has no annotator '" + id + "'");
  }

  DifferentialGroups result;
  result.annotator_id = id;
  for (const auto& g : annotators[id]) {
    DifferentialGroup group;
    if (!g.contains("group_id") || !g["group_id"].is_number_integer()) {
      throw Error("groups file " + path + ": group without integer group_id");
    }
    group.id = g["group_id"].get<int>();
    if (g.contains("name")) group.name = g["name"].get<std::string>();
    if (!g.contains("members") || !g["members"].is_array()) {
      throw Error("groups file " + path + ": group " +
                  std::to_string(group.id) + " without members array");
    }
    for (const auto& m : g["members"]) group.members.push_back(m.get<std::string>());
    result.groups.push_back(std::move(group));
  }
  result.validate(vocab);
  return result;
}

std::int64_t LabelGraph::edge_count() const {
  return static_cast<std::int64_t>(edges.cast<std::int64_t>().sum() / 2);
}

void LabelGraph::validate() const {
  if (size < 2) throw Error("label graph needs size >= 2");
  if (edges.rows() != size || edges.cols() != size) {
    throw Error("label graph adjacency has the wrong shape");
  }
  for (int i = 0; i < size; ++i) {
    if (edges(i, i) != 0) throw Error("label graph has a self loop");
    for (int j = 0; j < size; ++j) {
      int e = edges(i, j);
      if (e != 0 && e != 1) throw Error("label graph entry outside {0,1}");
      if (e != edges(j, i)) throw Error("label graph is not symmetric");
    }
  }
}

LabelGraph build_cooccurrence_graph_indexed(
    const std::vector<std::vector<int>>& samples, int label_count, double t) {
  if (t < 0.0 || t > 1.0) throw Error("co-occurrence threshold must be in [0,1]");
  if (samples.empty()) throw Error("no samples to build a co-occurrence graph from");
  if (label_count < 2) throw Error("co-occurrence graph needs >= 2 labels");

  Eigen::VectorXi single = Eigen::VectorXi::Zero(label_count);
  IntMatrix pair = zero_edges(label_count);
  for (const auto& raw : samples) {
    std::vector<int> set = raw;
    std::sort(set.begin(), set.end());
    set.erase(std::unique(set.begin(), set.end()), set.end());
    for (int l : set) {
      if (l < 0 || l >= label_count) throw Error("label index out of range in sample");
      single(l) += 1;
    }
    for (std::size_t a = 0; a < set.size(); ++a) {
      for (std::size_t b = a + 1; b < set.size(); ++b) {
        pair(set[a], set[b]) += 1;
        pair(set[b], set[a]) += 1;
      }
    }
  }

  LabelGraph g;
  g.size = label_count;
  g.source = GraphSource::Cooccurrence;
  g.threshold = t;
  g.edges = zero_edges(label_count);
  for (int i = 0; i < label_count; ++i) {
    for (int j = i + 1; j < label_count; ++j) {
      int denom = single(i) + single(j);
      if (denom == 0) continue;  // neither label observed: no evidence, no edge
      double ratio = static_cast<double>(pair(i, j)) / static_cast<double>(denom);
      if (ratio >= t) {
        g.edges(i, j) = 1;
        g.edges(j, i) = 1;
      }
    }
  }
  return g;
}

LabelGraph build_cooccurrence_graph(
    const std::vector<std::vector<std::string>>& samples,
    const LabelVocabulary& vocab, double t) {
  std::vector<std::vector<int>> indexed;
  indexed.reserve(samples.size());
  for (const auto& s : samples) {
    std::vector<int> set;
    set.reserve(s.size());
    for (const auto& label : s) set.push_back(vocab.index_of(label));
    indexed.push_back(std::move(set));
  }
  return build_cooccurrence_graph_indexed(indexed, vocab.size(), t);
}

LabelGraph build_knowledge_graph(const DifferentialGroups& a,
                                 const DifferentialGroups& b,
                                 const LabelVocabulary& vocab) {
  a.validate(vocab);
  b.validate(vocab);
  IntMatrix rel_a = cogrouping(a, vocab);
  IntMatrix rel_b = cogrouping(b, vocab);

  LabelGraph g;
  g.size = vocab.size();
  g.source = GraphSource::Knowledge;
  g.edges = (rel_a.array() * rel_b.array()).matrix();
  return g;
}

LabelGraph random_graph(int size, double density, std::uint64_t seed) {
  if (size < 2) throw Error("random graph needs size >= 2");
  if (density < 0.0 || density > 1.0) throw Error("density must be in [0,1]");

  Rng rng(seed);
  LabelGraph g;
  g.size = size;
  g.source = GraphSource::Random;
  g.edges = zero_edges(size);
  for (int i = 0; i < size; ++i) {
    for (int j = i + 1; j < size; ++j) {
      if (rng.uniform() < density) {
        g.edges(i, j) = 1;
        g.edges(j, i) = 1;
      }
    }
  }
  return g;
}

NormalizedAdjacency normalize_adjacency(const LabelGraph& g) {
  g.validate();
  const int n = g.size;
  Matrix a = g.edges.cast<double>();
  a += Matrix::Identity(n, n);  // self loops keep every degree positive
  Vector inv_sqrt_deg = a.rowwise().sum().array().rsqrt();
  NormalizedAdjacency result;
  result.size = n;
  result.matrix = inv_sqrt_deg.asDiagonal() * a * inv_sqrt_deg.asDiagonal();
  return result;
}

PropagationMatrix propagation_matrix(const NormalizedAdjacency& adj, int order) {
  if (order < 1) throw Error("propagation order must be >= 1");
  PropagationMatrix p;
  p.order = order;
  p.basis = PropagationBasis::AdjacencyPower;
  p.matrix = adj.matrix;
  for (int k = 1; k < order; ++k) p.matrix = adj.matrix * p.matrix;
  return p;
}

PropagationMatrix chebyshev_matrix(const NormalizedAdjacency& adj, int order) {
  if (order < 1) throw Error("propagation order must be >= 1");
  const int n = adj.size;
  Matrix laplacian = Matrix::Identity(n, n) - adj.matrix;
  double lambda_max = spectral_radius(laplacian);
  if (lambda_max <= 0.0) lambda_max = 2.0;  // edgeless: L = 0, any scale works
  Matrix rescaled = 2.0 / lambda_max * laplacian - Matrix::Identity(n, n);

  Matrix t_prev = Matrix::Identity(n, n);  // T_0
  Matrix t_cur = rescaled;                 // T_1
  for (int k = 2; k <= order; ++k) {
    Matrix t_next = 2.0 * rescaled * t_cur - t_prev;
    t_prev = std::move(t_cur);
    t_cur = std::move(t_next);
  }

  PropagationMatrix p;
  p.order = order;
  p.basis = PropagationBasis::Chebyshev;
  p.matrix = std::move(t_cur);
  return p;
}

double spectral_radius(const Matrix& m, int iterations) {
  if (m.rows() != m.cols()) throw Error("spectral radius needs a square matrix");
  const int n = static_cast<int>(m.rows());
  Rng rng(0x5eed5eedULL);
  Vector v(n);
  for (int i = 0; i < n; ++i) v(i) = rng.uniform(-1.0, 1.0);
  v.normalize();
  double radius = 0.0;
  for (int it = 0; it < iterations; ++it) {
    Vector next = m * v;
    double norm = next.norm();
    if (norm == 0.0) return 0.0;
    radius = norm;
    v = next / norm;
  }
  return radius;
}

void LabelGraph::save(const std::string& path) const {
  validate();
  auto out = detail::open_output(path);
  out << "C=" << size << " source=" << source_name(source) << " t=";
  if (source == GraphSource::Cooccurrence) {
    out << detail::format_double(threshold);
  } else {
    out << "n/a";
  }
  out << '\n';
  for (int i = 0; i < size; ++i) {
    for (int j = i + 1; j < size; ++j) {
      if (edges(i, j) != 0) out << i << '\t' << j << '\n';
    }
  }
  detail::finish_output(out, path);
}

LabelGraph LabelGraph::load(const std::string& path) {
  auto in = detail::open_input(path);
  std::string header;
  if (!detail::getline_norm(in, header)) throw Error("graph file is empty: " + path);

  auto fields = detail::split(header, ' ');
  if (fields.size() != 3 || fields[0].rfind("C=", 0) != 0 ||
      fields[1].rfind("source=", 0) != 0 || fields[2].rfind("t=", 0) != 0) {
    throw Error("bad graph header in " + path + ": " + header);
  }
  LabelGraph g;
  g.size = static_cast<int>(detail::parse_long(fields[0].substr(2), path + " header"));
  g.source = source_from(fields[1].substr(7));
  std::string t_text = fields[2].substr(2);
  if (t_text != "n/a") g.threshold = detail::parse_double(t_text, path + " header");
  if (g.size < 2) throw Error("graph file declares size < 2: " + path);
  g.edges = zero_edges(g.size);

  std::string line;
  int line_no = 1;
  while (detail::getline_norm(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto parts = detail::split(line, '\t');
    std::string where = path + ":" + std::to_string(line_no);
    if (parts.size() != 2) throw Error(where + ": expected 'i<TAB>j'");
    int i = static_cast<int>(detail::parse_long(parts[0], where));
    int j = static_cast<int>(detail::parse_long(parts[1], where));
    if (i < 0 || j < 0 || i >= g.size || j >= g.size || i >= j) {
      throw Error(where + ": edge endpoints must satisfy 0 <= i < j < C");
    }
    g.edges(i, j) = 1;
    g.edges(j, i) = 1;
  }
  g.validate();
  return g;
}

}  // namespace ddx
