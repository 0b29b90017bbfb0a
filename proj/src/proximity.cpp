#include "ddx/proximity.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "ddx/error.hpp"
#include "io_util.hpp"

namespace ddx {

namespace {

// Centered row and its norm; throws on constant input.
std::pair<Vector, double> center(const Vector& v, const std::string& who) {
  if (v.size() < 2) throw Error("proximity needs vectors of length >= 2");
  Vector c = v.array() - v.mean();
  double norm = c.norm();
  if (norm == 0.0) throw Error("zero centered norm: " + who + " is constant");
  return {std::move(c), norm};
}

}  // namespace

double pairwise_proximity(const Vector& u, const Vector& v) {
  if (u.size() != v.size()) throw Error("proximity vectors differ in length");
  auto [cu, nu] = center(u, "first vector");
  auto [cv, nv] = center(v, "second vector");
  return cu.dot(cv) / (nu * nv);
}

Matrix proximity_matrix(const Matrix& nodes) {
  const int n = static_cast<int>(nodes.rows());
  if (n < 1) throw Error("proximity matrix needs at least one node");

  Matrix centered(n, nodes.cols());
  Vector norms(n);
  for (int i = 0; i < n; ++i) {
    auto [c, norm] = center(nodes.row(i).transpose(), "node " + std::to_string(i));
    centered.row(i) = c.transpose();
    norms(i) = norm;
  }

  Matrix p = Matrix::Identity(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      double rho = centered.row(i).dot(centered.row(j)) / (norms(i) * norms(j));
      p(i, j) = rho;
      p(j, i) = rho;
    }
  }
  return p;
}

Matrix proximity_delta(const Matrix& p0, const Matrix& p2) {
  if (p0.rows() != p2.rows() || p0.cols() != p2.cols()) {
    throw Error("proximity matrices differ in size");
  }
  return p2 - p0;
}

ClusterSet extract_clusters(const Matrix& p, double threshold) {
  if (p.rows() != p.cols()) throw Error("proximity matrix must be square");
  if (threshold <= -1.0 || threshold >= 1.0) {
    throw Error("cluster threshold must lie in (-1, 1)");
  }
  const int n = static_cast<int>(p.rows());

  // Breadth-first components over the thresholded graph, seeded in index
  // order so components come out ordered by smallest member.
  std::vector<int> component(static_cast<std::size_t>(n), -1);
  ClusterSet set;
  set.label_count = n;
  set.threshold = threshold;
  for (int start = 0; start < n; ++start) {
    if (component[static_cast<std::size_t>(start)] >= 0) continue;
    int id = static_cast<int>(set.clusters.size());
    std::vector<int> members;
    std::vector<int> queue{start};
    component[static_cast<std::size_t>(start)] = id;
    while (!queue.empty()) {
      int u = queue.back();
      queue.pop_back();
      members.push_back(u);
      for (int v = 0; v < n; ++v) {
        if (v == u || component[static_cast<std::size_t>(v)] >= 0) continue;
        if (p(u, v) >= threshold) {
          component[static_cast<std::size_t>(v)] = id;
          queue.push_back(v);
        }
      }
    }
    std::sort(members.begin(), members.end());
    set.clusters.push_back(std::move(members));
  }
  set.validate();
  return set;
}

void save_proximity(const Matrix& m, const LabelVocabulary& vocab,
                    const std::string& path) {
  if (m.rows() != m.cols() || m.rows() != vocab.size()) {
    throw Error("proximity matrix does not match the vocabulary");
  }
  auto out = detail::open_output(path);
  for (int j = 0; j < vocab.size(); ++j) {
    if (j > 0) out << '\t';
    out << vocab.label(j);
  }
  out << '\n';
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out << '\t';
      out << detail::format_double(m(i, j));
    }
    out << '\n';
  }
  detail::finish_output(out, path);
}

}  // namespace ddx
