#pragma once

#include <string>

#include "ddx/clusters.hpp"
#include "ddx/types.hpp"
#include "ddx/vocab.hpp"

namespace ddx {

// Centered cosine between two equal-length vectors: subtract each vector's
// mean, then cosine. Rejects constant vectors (zero centered norm).
double pairwise_proximity(const Vector& u, const Vector& v);

// All row pairs of a C x d node matrix; symmetric with unit diagonal.
Matrix proximity_matrix(const Matrix& nodes);

// Elementwise p2 - p0.
Matrix proximity_delta(const Matrix& p0, const Matrix& p2);

// Connected components of the graph with an edge wherever
// p(i,j) >= threshold, i != j. Components ordered by smallest member.
ClusterSet extract_clusters(const Matrix& p, double threshold);

// C x C tab-separated decimals preceded by a vocabulary-order header row.
void save_proximity(const Matrix& m, const LabelVocabulary& vocab,
                    const std::string& path);

}  // namespace ddx
