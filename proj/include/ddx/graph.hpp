#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ddx/types.hpp"
#include "ddx/vocab.hpp"

namespace ddx {

struct DifferentialGroup {
  int id = 0;
  std::string name;  // free-text description, not used for matching
  std::vector<std::string> members;
};

// One annotator's differential-diagnosis groups. Groups may overlap; every
// member must be a vocabulary label and every group needs >= 2 members
// (singletons contribute no edges and are rejected at load).
struct DifferentialGroups {
  std::string annotator_id;
  std::vector<DifferentialGroup> groups;

  // File schema: {"annotators": {"<id>": [{"group_id", "members", ...}]}}.
  // With an empty `annotator` the file must contain exactly one entry.
  static DifferentialGroups load(const std::string& path,
                                 const LabelVocabulary& vocab,
                                 const std::string& annotator = "");

  void validate(const LabelVocabulary& vocab) const;
};

enum class GraphSource { Cooccurrence, Knowledge, Random };

// Undirected label graph: symmetric binary adjacency with zero diagonal.
struct LabelGraph {
  int size = 0;
  IntMatrix edges;  // size x size, entries in {0,1}
  GraphSource source = GraphSource::Random;
  double threshold = 0.0;  // co-occurrence only; meaningless otherwise

  bool has_edge(int i, int j) const { return edges(i, j) != 0; }
  std::int64_t edge_count() const;

  // Header line "C=<int> source=<string> t=<real|n/a>", then one
  // "i\tj" line per edge with i<j.
  void save(const std::string& path) const;
  static LabelGraph load(const std::string& path);

  void validate() const;
};

// Self-loop renormalized operator A_hat = D^{-1/2} (A+I) D^{-1/2}.
struct NormalizedAdjacency {
  int size = 0;
  Matrix matrix;
};

enum class PropagationBasis { AdjacencyPower, Chebyshev };

// k-step propagation operator fed to the GC layers. Default basis is the
// k-th power of A_hat; the Chebyshev basis T_k(2L/lambda_max - I) with
// L = I - A_hat is available behind the switch.
struct PropagationMatrix {
  int order = 1;
  PropagationBasis basis = PropagationBasis::AdjacencyPower;
  Matrix matrix;
};

// Eq-style co-occurrence rule: edge iff C(i,j)/(C(i)+C(j)) >= t, counted over
// the given samples only. Order of samples does not matter.
LabelGraph build_cooccurrence_graph(
    const std::vector<std::vector<std::string>>& samples,
    const LabelVocabulary& vocab, double t);

// Same rule on pre-resolved label index sets.
LabelGraph build_cooccurrence_graph_indexed(
    const std::vector<std::vector<int>>& samples, int label_count, double t);

// Edge iff both annotators co-group the pair in at least one of their groups.
LabelGraph build_knowledge_graph(const DifferentialGroups& a,
                                 const DifferentialGroups& b,
                                 const LabelVocabulary& vocab);

// Each unordered pair becomes an edge independently with the given
// probability; same seed, same graph.
LabelGraph random_graph(int size, double density, std::uint64_t seed);

NormalizedAdjacency normalize_adjacency(const LabelGraph& g);

// A_hat^k by repeated multiplication; k >= 1.
PropagationMatrix propagation_matrix(const NormalizedAdjacency& adj, int order);

// Chebyshev polynomial of the rescaled Laplacian, order >= 1.
PropagationMatrix chebyshev_matrix(const NormalizedAdjacency& adj, int order);

// Largest absolute eigenvalue estimate of a symmetric matrix; deterministic
// (fixed start vector and iteration count).
double spectral_radius(const Matrix& m, int iterations = 200);

}  // namespace ddx
