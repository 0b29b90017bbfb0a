#include "ddx/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <nlohmann/json.hpp>

#include "ddx/error.hpp"
#include "io_util.hpp"

namespace ddx {

namespace {

void check_shapes(Eigen::Index r1, Eigen::Index c1, Eigen::Index r2,
                  Eigen::Index c2) {
  if (r1 != r2 || c1 != c2) throw Error("scores and targets differ in shape");
}

int row_positives(const IntMatrix& targets, Eigen::Index i) {
  int pos = 0;
  for (Eigen::Index j = 0; j < targets.cols(); ++j) {
    int y = targets(i, j);
    if (y != 0 && y != 1) throw Error("targets must be binary");
    pos += y;
  }
  return pos;
}

// Mis-ordered pair count for one row: positives scored <= some negative,
// ties included. Sorted sweep over equal-score blocks.
std::int64_t misordered_pairs(const Matrix& scores, const IntMatrix& targets,
                              Eigen::Index i) {
  const Eigen::Index c = scores.cols();
  std::vector<int> order(static_cast<std::size_t>(c));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return scores(i, a) < scores(i, b);
  });

  std::int64_t count = 0;
  std::int64_t positives_below = 0;
  std::size_t k = 0;
  while (k < order.size()) {
    std::size_t block_end = k;
    std::int64_t block_pos = 0, block_neg = 0;
    while (block_end < order.size() &&
           scores(i, order[block_end]) == scores(i, order[k])) {
      if (targets(i, order[block_end]) == 1) ++block_pos; else ++block_neg;
      ++block_end;
    }
    // A negative in this block dominates every positive scored <= it.
    count += block_neg * (positives_below + block_pos);
    positives_below += block_pos;
    k = block_end;
  }
  return count;
}

// Single best label, ties resolved to the lowest index.
int argmax_lowest(const Matrix& scores, Eigen::Index i) {
  int best = 0;
  for (int j = 1; j < scores.cols(); ++j) {
    if (scores(i, j) > scores(i, best)) best = j;
  }
  return best;
}

std::vector<int> top_indices(const Matrix& scores, Eigen::Index i, int n_rank) {
  std::vector<int> order(static_cast<std::size_t>(scores.cols()));
  std::iota(order.begin(), order.end(), 0);
  std::partial_sort(order.begin(), order.begin() + n_rank, order.end(),
                    [&](int a, int b) {
                      if (scores(i, a) != scores(i, b)) {
                        return scores(i, a) > scores(i, b);
                      }
                      return a < b;
                    });
  order.resize(static_cast<std::size_t>(n_rank));
  return order;
}

double average_precision(const Matrix& scores, const IntMatrix& targets,
                         Eigen::Index cls, int positives) {
  const Eigen::Index n = scores.rows();
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (scores(a, cls) != scores(b, cls)) return scores(a, cls) > scores(b, cls);
    return a < b;
  });
  double ap = 0.0;
  int hits = 0;
  for (std::size_t rank = 0; rank < order.size(); ++rank) {
    if (targets(order[rank], cls) == 1) {
      ++hits;
      ap += static_cast<double>(hits) / static_cast<double>(rank + 1);
    }
  }
  return ap / positives;
}

double map_with_skips(const Matrix& scores, const IntMatrix& targets,
                      int* skipped_out) {
  check_shapes(scores.rows(), scores.cols(), targets.rows(), targets.cols());
  double sum = 0.0;
  int classes = 0, skipped = 0;
  for (Eigen::Index cls = 0; cls < targets.cols(); ++cls) {
    int positives = 0;
    for (Eigen::Index i = 0; i < targets.rows(); ++i) {
      int y = targets(i, cls);
      if (y != 0 && y != 1) throw Error("targets must be binary");
      positives += y;
    }
    if (positives == 0) {
      ++skipped;
      continue;
    }
    sum += average_precision(scores, targets, cls, positives);
    ++classes;
  }
  if (classes == 0) throw Error("no class has a positive sample");
  if (skipped_out) *skipped_out = skipped;
  return sum / classes;
}

}  // namespace

double hamming_loss(const IntMatrix& predictions, const IntMatrix& targets) {
  check_shapes(predictions.rows(), predictions.cols(), targets.rows(),
               targets.cols());
  std::int64_t disagreements = 0;
  for (Eigen::Index i = 0; i < predictions.rows(); ++i) {
    for (Eigen::Index j = 0; j < predictions.cols(); ++j) {
      int p = predictions(i, j), y = targets(i, j);
      if ((p != 0 && p != 1) || (y != 0 && y != 1)) {
        throw Error("hamming loss needs binary matrices");
      }
      disagreements += p != y;
    }
  }
  return static_cast<double>(disagreements) /
         static_cast<double>(predictions.size());
}

double ranking_loss(const Matrix& scores, const IntMatrix& targets) {
  check_shapes(scores.rows(), scores.cols(), targets.rows(), targets.cols());
  const Eigen::Index c = scores.cols();
  double sum = 0.0;
  for (Eigen::Index i = 0; i < scores.rows(); ++i) {
    int pos = row_positives(targets, i);
    if (pos == 0 || pos == c) {
      throw Error("ranking loss undefined for row " + std::to_string(i) +
                  ": needs at least one relevant and one irrelevant label");
    }
    sum += static_cast<double>(misordered_pairs(scores, targets, i)) /
           (static_cast<double>(pos) * static_cast<double>(c - pos));
  }
  return sum / static_cast<double>(scores.rows());
}

double one_error(const Matrix& scores, const IntMatrix& targets) {
  check_shapes(scores.rows(), scores.cols(), targets.rows(), targets.cols());
  int misses = 0;
  for (Eigen::Index i = 0; i < scores.rows(); ++i) {
    if (row_positives(targets, i) == 0) {
      throw Error("one-error undefined for row " + std::to_string(i) +
                  ": no relevant label");
    }
    misses += targets(i, argmax_lowest(scores, i)) == 0;
  }
  return static_cast<double>(misses) / static_cast<double>(scores.rows());
}

double top_n_accuracy(const Matrix& scores, const IntMatrix& targets,
                      int n_rank) {
  check_shapes(scores.rows(), scores.cols(), targets.rows(), targets.cols());
  if (n_rank < 1 || n_rank > scores.cols()) {
    throw Error("top-n rank must lie in [1, C]");
  }
  int hits = 0;
  for (Eigen::Index i = 0; i < scores.rows(); ++i) {
    row_positives(targets, i);  // validates binary entries
    for (int j : top_indices(scores, i, n_rank)) {
      if (targets(i, j) == 1) {
        ++hits;
        break;
      }
    }
  }
  return static_cast<double>(hits) / static_cast<double>(scores.rows());
}

double mean_average_precision(const Matrix& scores, const IntMatrix& targets) {
  return map_with_skips(scores, targets, nullptr);
}

void MetricsReport::validate() const {
  auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (!in_unit(top1_acc) || !in_unit(top3_acc) || !in_unit(top5_acc) ||
      !in_unit(map) || !in_unit(hamming) || !in_unit(ranking) ||
      !in_unit(one_err)) {
    throw Error("metrics report value outside [0, 1]");
  }
  if (top1_acc > top3_acc || top3_acc > top5_acc) {
    throw Error("top-n accuracies must be nondecreasing");
  }
}

MetricsReport evaluate_scores(const Matrix& scores, const IntMatrix& targets,
                              double threshold) {
  check_shapes(scores.rows(), scores.cols(), targets.rows(), targets.cols());
  if (!scores.allFinite()) throw Error("scores contain non-finite values");
  const Eigen::Index n = scores.rows();
  const Eigen::Index c = scores.cols();

  MetricsReport report;
  report.n = static_cast<int>(n);
  report.label_count = static_cast<int>(c);
  report.threshold = threshold;

  IntMatrix predictions(n, c);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < c; ++j) {
      predictions(i, j) = scores(i, j) >= threshold ? 1 : 0;
    }
  }
  report.hamming = hamming_loss(predictions, targets);
  report.map = map_with_skips(scores, targets, &report.skipped_map_classes);

  // Rows that violate a rank metric's precondition drop out of that metric
  // only.
  std::vector<int> rankable, rated;
  for (Eigen::Index i = 0; i < n; ++i) {
    int pos = row_positives(targets, i);
    if (pos > 0 && pos < c) rankable.push_back(static_cast<int>(i));
    if (pos > 0) rated.push_back(static_cast<int>(i));
  }
  report.excluded_ranking_rows = static_cast<int>(n) - static_cast<int>(rankable.size());
  report.excluded_top_rank_rows = static_cast<int>(n) - static_cast<int>(rated.size());

  auto take_rows = [&](const std::vector<int>& rows, auto& src) {
    using Mat = std::remove_cvref_t<decltype(src)>;
    Mat out(static_cast<Eigen::Index>(rows.size()), c);
    for (std::size_t r = 0; r < rows.size(); ++r) out.row(static_cast<Eigen::Index>(r)) = src.row(rows[r]);
    return out;
  };

  if (!rankable.empty()) {
    Matrix s = take_rows(rankable, scores);
    IntMatrix t = take_rows(rankable, targets);
    report.ranking = ranking_loss(s, t);
  }
  if (!rated.empty()) {
    Matrix s = take_rows(rated, scores);
    IntMatrix t = take_rows(rated, targets);
    report.one_err = one_error(s, t);
    report.top1_acc = top_n_accuracy(s, t, std::min<int>(1, static_cast<int>(c)));
    report.top3_acc = top_n_accuracy(s, t, std::min<int>(3, static_cast<int>(c)));
    report.top5_acc = top_n_accuracy(s, t, std::min<int>(5, static_cast<int>(c)));
  }
  report.validate();
  return report;
}

MetricsReport evaluate(const GcnModel& model, const LabelGraph& graph,
                       const Dataset& dataset, double threshold) {
  if (dataset.label_count() != model.label_count) {
    throw Error("dataset labels do not match the model");
  }
  if (dataset.vocab().hash() != model.vocab_hash) {
    throw Error("dataset vocabulary does not match the model checkpoint");
  }
  if (graph.size != model.label_count) {
    throw Error("graph size does not match the model");
  }
  auto [p1, p2] = build_propagation(graph, model.config);
  GcnActivations act = gcn_forward(model, p1, p2);
  Matrix scores = score_batch(model, act.classifier, dataset.feature_matrix());
  return evaluate_scores(scores, label_matrix(dataset), threshold);
}

MetricsReport evaluate(const LinearBaseline& model, const Dataset& dataset,
                       double threshold) {
  if (dataset.label_count() != model.label_count) {
    throw Error("dataset labels do not match the baseline");
  }
  if (dataset.vocab().hash() != model.vocab_hash) {
    throw Error("dataset vocabulary does not match the model checkpoint");
  }
  Matrix scores = score_batch(model, dataset.feature_matrix());
  return evaluate_scores(scores, label_matrix(dataset), threshold);
}

void MetricsReport::save(const std::string& path) const {
  validate();
  auto out = detail::open_output(path);
  out << "{\n"
      << "  \"top1_acc\": " << detail::format_double(top1_acc) << ",\n"
      << "  \"top3_acc\": " << detail::format_double(top3_acc) << ",\n"
      << "  \"top5_acc\": " << detail::format_double(top5_acc) << ",\n"
      << "  \"map\": " << detail::format_double(map) << ",\n"
      << "  \"hamming_loss\": " << detail::format_double(hamming) << ",\n"
      << "  \"ranking_loss\": " << detail::format_double(ranking) << ",\n"
      << "  \"one_error\": " << detail::format_double(one_err) << ",\n"
      << "  \"n\": " << n << ",\n"
      << "  \"C\": " << label_count << ",\n"
      << "  \"threshold\": " << detail::format_double(threshold) << ",\n"
      << "  \"excluded_rows\": {\"ranking_loss\": " << excluded_ranking_rows
      << ", \"top_rank\": " << excluded_top_rank_rows
      << ", \"map_classes\": " << skipped_map_classes << "}\n"
      << "}\n";
  detail::finish_output(out, path);
}

MetricsReport MetricsReport::load(const std::string& path) {
  auto in = detail::open_input(path);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const std::exception& e) {
    throw Error("malformed metrics report " + path + ": " + e.what());
  }
  MetricsReport r;
  r.top1_acc = doc.at("top1_acc").get<double>();
  r.top3_acc = doc.at("top3_acc").get<double>();
  r.top5_acc = doc.at("top5_acc").get<double>();
  r.map = doc.at("map").get<double>();
  r.hamming = doc.at("hamming_loss").get<double>();
  r.ranking = doc.at("ranking_loss").get<double>();
  r.one_err = doc.at("one_error").get<double>();
  r.n = doc.at("n").get<int>();
  r.label_count = doc.at("C").get<int>();
  r.threshold = doc.at("threshold").get<double>();
  const auto& excluded = doc.at("excluded_rows");
  r.excluded_ranking_rows = excluded.at("ranking_loss").get<int>();
  r.excluded_top_rank_rows = excluded.at("top_rank").get<int>();
  r.skipped_map_classes = excluded.at("map_classes").get<int>();
  r.validate();
  return r;
}

}  // namespace ddx
