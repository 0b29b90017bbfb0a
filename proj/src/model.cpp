#include "ddx/model.hpp"

#include <cmath>
#include <cstdio>

#include <nlohmann/json.hpp>

#include "ddx/error.hpp"
#include "ddx/rng.hpp"
#include "io_util.hpp"

namespace ddx {

namespace {

constexpr const char* kCheckpointFormat = "ddx-checkpoint-v1";

double sigmoid(double logit) {
  if (logit >= 0.0) return 1.0 / (1.0 + std::exp(-logit));
  double e = std::exp(logit);
  return e / (1.0 + e);
}

Matrix sigmoid(const Matrix& logits) {
  return logits.unaryExpr([](double l) { return sigmoid(l); });
}

// Uniform +-1/sqrt(fan_in), filled row-major so the draw order is pinned.
void fill_uniform(Matrix& m, int fan_in, Rng& rng) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      m(i, j) = rng.uniform(-bound, bound);
    }
  }
}

void check_targets(const IntMatrix& targets) {
  for (Eigen::Index i = 0; i < targets.rows(); ++i) {
    for (Eigen::Index j = 0; j < targets.cols(); ++j) {
      int y = targets(i, j);
      if (y != 0 && y != 1) throw Error("targets must be binary");
    }
  }
}

void check_finite(const Matrix& g, const char* name) {
  if (!g.allFinite()) throw Error(std::string("non-finite gradient for ") + name);
}

const char* basis_name(PropagationBasis b) {
  return b == PropagationBasis::AdjacencyPower ? "power" : "chebyshev";
}

PropagationBasis basis_from(const std::string& name) {
  if (name == "power") return PropagationBasis::AdjacencyPower;
  if (name == "chebyshev") return PropagationBasis::Chebyshev;
  throw Error("unknown propagation basis: " + name);
}

void check_propagation(const GcnModel& model, const PropagationMatrix& p,
                       int expected_order, const char* which) {
  if (p.order != expected_order) {
    throw Error(std::string(which) + " has order " + std::to_string(p.order) +
                ", model expects " + std::to_string(expected_order));
  }
  if (p.basis != model.config.basis) {
    throw Error(std::string(which) + " uses a different propagation basis");
  }
  if (p.matrix.rows() != model.label_count || p.matrix.cols() != model.label_count) {
    throw Error(std::string(which) + " size does not match the label count");
  }
}

}  // namespace

void GcnConfig::validate() const {
  if (embed_dim < 1 || hidden_dim < 1 || feature_dim < 1) {
    throw Error("model dimensions must be >= 1");
  }
  if (order1 < 1 || order2 < 1) throw Error("propagation orders must be >= 1");
  if (leaky_slope < 0.0 || leaky_slope >= 1.0) {
    throw Error("leaky slope must lie in [0, 1)");
  }
}

void GcnModel::validate() const {
  config.validate();
  if (label_count < 2) throw Error("model needs >= 2 labels");
  if (embeddings.rows() != label_count || embeddings.cols() != config.embed_dim) {
    throw Error("embedding matrix shape mismatch");
  }
  if (w1.rows() != config.embed_dim || w1.cols() != config.hidden_dim) {
    throw Error("W1 shape mismatch");
  }
  if (w2.rows() != config.hidden_dim || w2.cols() != config.feature_dim) {
    throw Error("W2 shape mismatch");
  }
  if (config.use_adapter) {
    if (adapter_weight.rows() != config.feature_dim ||
        adapter_weight.cols() != config.feature_dim ||
        adapter_bias.size() != config.feature_dim) {
      throw Error("adapter shape mismatch");
    }
  }
  if (!embeddings.allFinite() || !w1.allFinite() || !w2.allFinite() ||
      (config.use_adapter && (!adapter_weight.allFinite() || !adapter_bias.allFinite()))) {
    throw Error("model parameters contain non-finite values");
  }
}

std::int64_t GcnModel::parameter_count() const {
  std::int64_t n = static_cast<std::int64_t>(label_count) * config.embed_dim +
                   static_cast<std::int64_t>(config.embed_dim) * config.hidden_dim +
                   static_cast<std::int64_t>(config.hidden_dim) * config.feature_dim;
  if (config.use_adapter) {
    n += static_cast<std::int64_t>(config.feature_dim) * config.feature_dim +
         config.feature_dim;
  }
  return n;
}

void LinearBaseline::validate() const {
  if (label_count < 2 || feature_dim < 1) throw Error("baseline shape invalid");
  if (weight.rows() != label_count || weight.cols() != feature_dim ||
      bias.size() != label_count) {
    throw Error("baseline shape mismatch");
  }
  if (!weight.allFinite() || !bias.allFinite()) {
    throw Error("baseline parameters contain non-finite values");
  }
}

GcnModel init_model(const GcnConfig& config, const LabelVocabulary& vocab,
                    std::uint64_t seed, const std::optional<Matrix>& embeddings) {
  config.validate();
  GcnModel model;
  model.config = config;
  model.label_count = vocab.size();
  model.vocab_hash = vocab.hash();

  Rng rng(seed);
  if (embeddings) {
    if (embeddings->rows() != vocab.size() || embeddings->cols() != config.embed_dim) {
      throw Error("provided embeddings are " + std::to_string(embeddings->rows()) +
                  "x" + std::to_string(embeddings->cols()) + ", expected " +
                  std::to_string(vocab.size()) + "x" +
                  std::to_string(config.embed_dim));
    }
    model.embeddings = *embeddings;
  } else {
    model.embeddings.resize(vocab.size(), config.embed_dim);
    fill_uniform(model.embeddings, config.embed_dim, rng);
  }
  model.w1.resize(config.embed_dim, config.hidden_dim);
  fill_uniform(model.w1, config.embed_dim, rng);
  model.w2.resize(config.hidden_dim, config.feature_dim);
  fill_uniform(model.w2, config.hidden_dim, rng);
  if (config.use_adapter) {
    // Identity start: a fresh model scores exactly like the adapter-less one.
    model.adapter_weight = Matrix::Identity(config.feature_dim, config.feature_dim);
    model.adapter_bias = Vector::Zero(config.feature_dim);
  }
  model.validate();
  return model;
}

LinearBaseline init_linear(const LabelVocabulary& vocab, int feature_dim,
                           std::uint64_t seed) {
  if (feature_dim < 1) throw Error("feature dimension must be >= 1");
  LinearBaseline model;
  model.label_count = vocab.size();
  model.feature_dim = feature_dim;
  model.vocab_hash = vocab.hash();
  Rng rng(seed);
  model.weight.resize(vocab.size(), feature_dim);
  fill_uniform(model.weight, feature_dim, rng);
  model.bias = Vector::Zero(vocab.size());
  model.validate();
  return model;
}

GcnActivations gcn_forward(const GcnModel& model, const PropagationMatrix& p1,
                           const PropagationMatrix& p2) {
  model.validate();
  check_propagation(model, p1, model.config.order1, "P1");
  check_propagation(model, p2, model.config.order2, "P2");

  const double slope = model.config.leaky_slope;
  GcnActivations act;
  act.propagated0 = p1.matrix * model.embeddings;
  act.pre1 = act.propagated0 * model.w1;
  act.hidden = act.pre1.array().max(0.0) + slope * act.pre1.array().min(0.0);
  act.propagated1 = p2.matrix * act.hidden;
  act.classifier = act.propagated1 * model.w2;
  return act;
}

std::pair<PropagationMatrix, PropagationMatrix> build_propagation(
    const LabelGraph& graph, const GcnConfig& config) {
  config.validate();
  NormalizedAdjacency adj = normalize_adjacency(graph);
  if (config.basis == PropagationBasis::Chebyshev) {
    return {chebyshev_matrix(adj, config.order1), chebyshev_matrix(adj, config.order2)};
  }
  return {propagation_matrix(adj, config.order1), propagation_matrix(adj, config.order2)};
}

Vector predict(const Matrix& classifier, const Vector& x) {
  if (classifier.cols() != x.size()) {
    throw Error("feature vector length does not match the classifier");
  }
  if (!x.allFinite()) throw Error("non-finite feature vector");
  Vector logits = classifier * x;
  return logits.unaryExpr([](double l) { return sigmoid(l); });
}

Vector predict(const GcnModel& model, const Matrix& classifier, const Vector& x) {
  if (!model.config.use_adapter) return predict(classifier, x);
  if (x.size() != model.config.feature_dim) {
    throw Error("feature vector length does not match the adapter");
  }
  if (!x.allFinite()) throw Error("non-finite feature vector");
  Vector adapted = model.adapter_weight * x + model.adapter_bias;
  return predict(classifier, adapted);
}

Matrix score_batch(const GcnModel& model, const Matrix& classifier,
                   const Matrix& features) {
  if (features.cols() != model.config.feature_dim) {
    throw Error("feature matrix width does not match the model");
  }
  Matrix adapted = features;
  if (model.config.use_adapter) {
    adapted = features * model.adapter_weight.transpose();
    adapted.rowwise() += model.adapter_bias.transpose();
  }
  return sigmoid(adapted * classifier.transpose());
}

Matrix score_batch(const LinearBaseline& model, const Matrix& features) {
  if (features.cols() != model.feature_dim) {
    throw Error("feature matrix width does not match the baseline");
  }
  Matrix logits = features * model.weight.transpose();
  logits.rowwise() += model.bias.transpose();
  return sigmoid(logits);
}

double bce_loss(const Matrix& scores, const IntMatrix& targets) {
  if (scores.rows() != targets.rows() || scores.cols() != targets.cols()) {
    throw Error("scores and targets differ in shape");
  }
  check_targets(targets);
  double sum = 0.0;
  for (Eigen::Index i = 0; i < scores.rows(); ++i) {
    for (Eigen::Index j = 0; j < scores.cols(); ++j) {
      double s = scores(i, j);
      if (!(s > 0.0 && s < 1.0)) {
        throw Error("scores must lie strictly inside (0, 1)");
      }
      sum -= targets(i, j) == 1 ? std::log(s) : std::log1p(-s);
    }
  }
  return sum / static_cast<double>(scores.size());
}

double bce_with_logits(const Matrix& logits, const IntMatrix& targets) {
  if (logits.rows() != targets.rows() || logits.cols() != targets.cols()) {
    throw Error("logits and targets differ in shape");
  }
  check_targets(targets);
  double sum = 0.0;
  for (Eigen::Index i = 0; i < logits.rows(); ++i) {
    for (Eigen::Index j = 0; j < logits.cols(); ++j) {
      double l = logits(i, j);
      double y = targets(i, j);
      sum += std::max(l, 0.0) - l * y + std::log1p(std::exp(-std::abs(l)));
    }
  }
  return sum / static_cast<double>(logits.size());
}

std::pair<double, GcnGradients> gcn_backward(const GcnModel& model,
                                             const PropagationMatrix& p1,
                                             const PropagationMatrix& p2,
                                             const Matrix& features,
                                             const IntMatrix& targets) {
  if (features.rows() != targets.rows() || targets.cols() != model.label_count) {
    throw Error("batch shapes do not match the model");
  }
  check_targets(targets);
  GcnActivations act = gcn_forward(model, p1, p2);

  Matrix adapted = features;
  if (model.config.use_adapter) {
    adapted = features * model.adapter_weight.transpose();
    adapted.rowwise() += model.adapter_bias.transpose();
  }
  Matrix logits = adapted * act.classifier.transpose();
  double loss = bce_with_logits(logits, targets);

  // d(mean BCE)/d(logits)
  Matrix g_logits = (sigmoid(logits) - targets.cast<double>()) /
                    static_cast<double>(logits.size());

  GcnGradients grads;
  Matrix g_classifier = g_logits.transpose() * adapted;  // C x feature_dim
  if (model.config.use_adapter) {
    Matrix g_adapted = g_logits * act.classifier;  // B x feature_dim
    grads.adapter_weight = g_adapted.transpose() * features;
    grads.adapter_bias = g_adapted.colwise().sum().transpose();
    check_finite(grads.adapter_weight, "adapter_weight");
    check_finite(grads.adapter_bias, "adapter_bias");
  }

  grads.w2 = act.propagated1.transpose() * g_classifier;
  Matrix g_hidden = p2.matrix.transpose() * g_classifier * model.w2.transpose();
  const double slope = model.config.leaky_slope;
  Matrix gate = act.pre1.unaryExpr([slope](double v) { return v > 0.0 ? 1.0 : slope; });
  Matrix g_pre1 = g_hidden.array() * gate.array();
  grads.w1 = act.propagated0.transpose() * g_pre1;
  grads.embeddings = p1.matrix.transpose() * g_pre1 * model.w1.transpose();

  check_finite(grads.embeddings, "embeddings");
  check_finite(grads.w1, "w1");
  check_finite(grads.w2, "w2");
  return {loss, std::move(grads)};
}

std::pair<double, LinearGradients> linear_backward(const LinearBaseline& model,
                                                   const Matrix& features,
                                                   const IntMatrix& targets) {
  model.validate();
  if (features.rows() != targets.rows() || targets.cols() != model.label_count ||
      features.cols() != model.feature_dim) {
    throw Error("batch shapes do not match the baseline");
  }
  check_targets(targets);
  Matrix logits = features * model.weight.transpose();
  logits.rowwise() += model.bias.transpose();
  double loss = bce_with_logits(logits, targets);

  Matrix g_logits = (sigmoid(logits) - targets.cast<double>()) /
                    static_cast<double>(logits.size());
  LinearGradients grads;
  grads.weight = g_logits.transpose() * features;
  grads.bias = g_logits.colwise().sum().transpose();
  check_finite(grads.weight, "weight");
  check_finite(grads.bias, "bias");
  return {loss, std::move(grads)};
}

namespace {

void write_array(std::ofstream& out, const char* name, const Matrix& m,
                 bool trailing_comma) {
  out << "    \"" << name << "\": {\"rows\": " << m.rows()
      << ", \"cols\": " << m.cols() << ", \"data\": [";
  bool first = true;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (!first) out << ',';
      out << detail::format_double(m(i, j));
      first = false;
    }
  }
  out << "]}" << (trailing_comma ? ",\n" : "\n");
}

std::string hash_hex(std::uint64_t h) {
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::uint64_t hash_from_hex(const std::string& s) {
  return std::stoull(s, nullptr, 16);
}

Matrix read_array(const nlohmann::json& params, const std::string& name,
                  const std::string& path) {
  if (!params.contains(name)) throw Error(path + ": checkpoint lacks " + name);
  const auto& node = params[name];
  Eigen::Index rows = node["rows"].get<Eigen::Index>();
  Eigen::Index cols = node["cols"].get<Eigen::Index>();
  const auto& data = node["data"];
  if (!data.is_array() || static_cast<Eigen::Index>(data.size()) != rows * cols) {
    throw Error(path + ": " + name + " data length mismatch");
  }
  Matrix m(rows, cols);
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      m(i, j) = data[static_cast<std::size_t>(k++)].get<double>();
    }
  }
  return m;
}

}  // namespace

void save_checkpoint(const GcnModel& model, const std::string& path) {
  model.validate();
  auto out = detail::open_output(path);
  out << "{\n"
      << "  \"format\": \"" << kCheckpointFormat << "\",\n"
      << "  \"kind\": \"gcn\",\n"
      << "  \"label_count\": " << model.label_count << ",\n"
      << "  \"vocab_hash\": \"" << hash_hex(model.vocab_hash) << "\",\n"
      << "  \"config\": {"
      << "\"embed_dim\": " << model.config.embed_dim
      << ", \"hidden_dim\": " << model.config.hidden_dim
      << ", \"feature_dim\": " << model.config.feature_dim
      << ", \"order1\": " << model.config.order1
      << ", \"order2\": " << model.config.order2
      << ", \"leaky_slope\": " << detail::format_double(model.config.leaky_slope)
      << ", \"use_adapter\": " << (model.config.use_adapter ? "true" : "false")
      << ", \"basis\": \"" << basis_name(model.config.basis) << "\"},\n"
      << "  \"params\": {\n";
  write_array(out, "embeddings", model.embeddings, true);
  write_array(out, "w1", model.w1, true);
  write_array(out, "w2", model.w2, model.config.use_adapter);
  if (model.config.use_adapter) {
    write_array(out, "adapter_weight", model.adapter_weight, true);
    write_array(out, "adapter_bias", model.adapter_bias, false);
  }
  out << "  }\n}\n";
  detail::finish_output(out, path);
}

void save_checkpoint(const LinearBaseline& model, const std::string& path) {
  model.validate();
  auto out = detail::open_output(path);
  out << "{\n"
      << "  \"format\": \"" << kCheckpointFormat << "\",\n"
      << "  \"kind\": \"linear\",\n"
      << "  \"label_count\": " << model.label_count << ",\n"
      << "  \"feature_dim\": " << model.feature_dim << ",\n"
      << "  \"vocab_hash\": \"" << hash_hex(model.vocab_hash) << "\",\n"
      << "  \"params\": {\n";
  write_array(out, "weight", model.weight, true);
  write_array(out, "bias", model.bias, false);
  out << "  }\n}\n";
  detail::finish_output(out, path);
}

Checkpoint load_checkpoint(const std::string& path) {
  auto in = detail::open_input(path);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const std::exception& e) {
    throw Error("malformed checkpoint " + path + ": " + e.what());
  }
  if (!doc.contains("format") || doc["format"] != kCheckpointFormat) {
    throw Error(path + ": not a recognized checkpoint");
  }
  const std::string kind = doc["kind"].get<std::string>();
  const auto& params = doc["params"];
  if (kind == "gcn") {
    GcnModel model;
    model.label_count = doc["label_count"].get<int>();
    model.vocab_hash = hash_from_hex(doc["vocab_hash"].get<std::string>());
    const auto& cfg = doc["config"];
    model.config.embed_dim = cfg["embed_dim"].get<int>();
    model.config.hidden_dim = cfg["hidden_dim"].get<int>();
    model.config.feature_dim = cfg["feature_dim"].get<int>();
    model.config.order1 = cfg["order1"].get<int>();
    model.config.order2 = cfg["order2"].get<int>();
    model.config.leaky_slope = cfg["leaky_slope"].get<double>();
    model.config.use_adapter = cfg["use_adapter"].get<bool>();
    model.config.basis = basis_from(cfg["basis"].get<std::string>());
    model.embeddings = read_array(params, "embeddings", path);
    model.w1 = read_array(params, "w1", path);
    model.w2 = read_array(params, "w2", path);
    if (model.config.use_adapter) {
      model.adapter_weight = read_array(params, "adapter_weight", path);
      model.adapter_bias = read_array(params, "adapter_bias", path).col(0);
    }
    model.validate();
    return model;
  }
  if (kind == "linear") {
    LinearBaseline model;
    model.label_count = doc["label_count"].get<int>();
    model.feature_dim = doc["feature_dim"].get<int>();
    model.vocab_hash = hash_from_hex(doc["vocab_hash"].get<std::string>());
    model.weight = read_array(params, "weight", path);
    model.bias = read_array(params, "bias", path).col(0);
    model.validate();
    return model;
  }
  throw Error(path + ": unknown checkpoint kind '" + kind + "'");
}

}  // namespace ddx
