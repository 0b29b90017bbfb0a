#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>

#include "ddx/graph.hpp"
#include "ddx/types.hpp"
#include "ddx/vocab.hpp"

namespace ddx {

struct GcnConfig {
  int embed_dim = 700;     // GCN-0 node dimension
  int hidden_dim = 1024;   // GCN-1 output dimension
  int feature_dim = 2048;  // GCN-2 output = image feature dimension
  int order1 = 1;          // propagation order of the first GC layer
  int order2 = 2;          // second layer reaches indirect neighbors
  double leaky_slope = 0.2;
  bool use_adapter = true;  // trainable linear map on the input features
  PropagationBasis basis = PropagationBasis::AdjacencyPower;

  void validate() const;
};

// Two GC layers over fixed propagation operators plus an optional feature
// adapter. The GCN output is the C x feature_dim classifier matrix; a label's
// score is the logistic of its classifier row dotted with the (adapted)
// feature vector.
struct GcnModel {
  GcnConfig config;
  int label_count = 0;
  std::uint64_t vocab_hash = 0;
  Matrix embeddings;      // Z: C x embed_dim
  Matrix w1;              // embed_dim x hidden_dim
  Matrix w2;              // hidden_dim x feature_dim
  Matrix adapter_weight;  // feature_dim x feature_dim when enabled, else 0x0
  Vector adapter_bias;    // feature_dim when enabled, else empty

  std::int64_t parameter_count() const;
  void validate() const;
};

// Plain logistic head on the raw features: scores = logistic(W x + b).
struct LinearBaseline {
  int label_count = 0;
  int feature_dim = 0;
  std::uint64_t vocab_hash = 0;
  Matrix weight;  // C x feature_dim
  Vector bias;    // C

  void validate() const;
};

// Weights drawn uniform on +-1/sqrt(fan_in) from the seed, in the fixed
// order Z (skipped when embeddings are provided), W1, W2. The adapter starts
// at identity with zero bias. Same seed and inputs give a bit-identical model.
GcnModel init_model(const GcnConfig& config, const LabelVocabulary& vocab,
                    std::uint64_t seed,
                    const std::optional<Matrix>& embeddings = std::nullopt);

LinearBaseline init_linear(const LabelVocabulary& vocab, int feature_dim,
                           std::uint64_t seed);

// Everything the backward pass reuses from a forward evaluation.
struct GcnActivations {
  Matrix propagated0;  // P1 Z                 (C x embed_dim)
  Matrix pre1;         // P1 Z W1 before the nonlinearity
  Matrix hidden;       // leaky_relu(pre1)     (C x hidden_dim)
  Matrix propagated1;  // P2 hidden            (C x hidden_dim)
  Matrix classifier;   // P2 hidden W2         (C x feature_dim)
};

// classifier = P2 * leaky_relu(P1 * Z * W1) * W2. P1/P2 must carry the
// configured orders, basis and size.
GcnActivations gcn_forward(const GcnModel& model, const PropagationMatrix& p1,
                           const PropagationMatrix& p2);

// Builds (P1, P2) for a model configuration from a label graph.
std::pair<PropagationMatrix, PropagationMatrix> build_propagation(
    const LabelGraph& graph, const GcnConfig& config);

// scores = logistic(classifier * x), elementwise in (0, 1).
Vector predict(const Matrix& classifier, const Vector& x);

// Adapter-aware variant: x is replaced by A x + b when the model has one.
Vector predict(const GcnModel& model, const Matrix& classifier,
               const Vector& x);

// n x C score matrices for a whole feature matrix (rows = samples).
Matrix score_batch(const GcnModel& model, const Matrix& classifier,
                   const Matrix& features);
Matrix score_batch(const LinearBaseline& model, const Matrix& features);

// Mean over all entries of -[y log s + (1-y) log(1-s)].
double bce_loss(const Matrix& scores, const IntMatrix& targets);

// Same value computed from raw logits without ever forming log(0).
double bce_with_logits(const Matrix& logits, const IntMatrix& targets);

struct GcnGradients {
  Matrix embeddings;
  Matrix w1;
  Matrix w2;
  Matrix adapter_weight;
  Vector adapter_bias;
};

struct LinearGradients {
  Matrix weight;
  Vector bias;
};

// Exact reverse-mode gradients of the batch-mean cross entropy with respect
// to every parameter. Returns the loss alongside.
std::pair<double, GcnGradients> gcn_backward(const GcnModel& model,
                                             const PropagationMatrix& p1,
                                             const PropagationMatrix& p2,
                                             const Matrix& features,
                                             const IntMatrix& targets);

std::pair<double, LinearGradients> linear_backward(const LinearBaseline& model,
                                                   const Matrix& features,
                                                   const IntMatrix& targets);

// Self-describing structured-text checkpoints; parameters as decimal 64-bit
// reals, bit-exact on round trip.
void save_checkpoint(const GcnModel& model, const std::string& path);
void save_checkpoint(const LinearBaseline& model, const std::string& path);

using Checkpoint = std::variant<GcnModel, LinearBaseline>;
Checkpoint load_checkpoint(const std::string& path);

}  // namespace ddx
