#pragma once

#include <string>

#include "ddx/dataset.hpp"
#include "ddx/model.hpp"
#include "ddx/types.hpp"

namespace ddx {

// Mean disagreement over all n*C positions of two binary matrices.
double hamming_loss(const IntMatrix& predictions, const IntMatrix& targets);

// Per sample: |{(k,l): y_k=1, y_l=0, f_k <= f_l}| / (pos * neg), averaged
// over samples. Ties count as mis-ordered. Rejects all-relevant or
// all-irrelevant rows, naming the row.
double ranking_loss(const Matrix& scores, const IntMatrix& targets);

// Fraction of samples whose top-scored label (ties to the lowest index) is
// not relevant. Rejects rows with no relevant label.
double one_error(const Matrix& scores, const IntMatrix& targets);

// Fraction of samples whose top n_rank labels intersect the relevant set.
double top_n_accuracy(const Matrix& scores, const IntMatrix& targets,
                      int n_rank);

// Macro mAP: per class, rank samples by score (ties to the lowest sample
// index); AP = mean over positives of precision at the hit. Classes without
// positives are skipped; rejects inputs where every class is empty.
double mean_average_precision(const Matrix& scores, const IntMatrix& targets);

struct MetricsReport {
  double top1_acc = 0.0;
  double top3_acc = 0.0;
  double top5_acc = 0.0;
  double map = 0.0;
  double hamming = 0.0;
  double ranking = 0.0;
  double one_err = 0.0;
  int n = 0;
  int label_count = 0;
  double threshold = 0.5;
  // Rows violating a metric's precondition are dropped from that metric
  // only; counts keep the report honest.
  int excluded_ranking_rows = 0;
  int excluded_top_rank_rows = 0;  // shared by one_error / top-n
  int skipped_map_classes = 0;

  void validate() const;
  void save(const std::string& path) const;
  static MetricsReport load(const std::string& path);
};

// Scores once, thresholds for the Hamming column (prediction = score >=
// threshold), ranks for everything else.
MetricsReport evaluate_scores(const Matrix& scores, const IntMatrix& targets,
                              double threshold = 0.5);

MetricsReport evaluate(const GcnModel& model, const LabelGraph& graph,
                       const Dataset& dataset, double threshold = 0.5);
MetricsReport evaluate(const LinearBaseline& model, const Dataset& dataset,
                       double threshold = 0.5);

}  // namespace ddx
