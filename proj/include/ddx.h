/*
 * C API of the ddx library: label-graph supervised multi-label
 * classification on precomputed feature vectors.
 *
 * Conventions:
 *   - Every object is an opaque handle created by a ddx_*_... constructor
 *     and released with the matching ddx_*_free (free functions accept NULL).
 *   - Functions return DDX_OK (0) on success; on failure they return a
 *     nonzero status and leave a message in ddx_last_error() (thread-local).
 *   - Out-parameters are written only on success.
 */
#ifndef DDX_H
#define DDX_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ddx_status {
  DDX_OK = 0,
  DDX_ERR_INVALID_ARGUMENT = 1, /* null handle, bad enum, bad buffer size */
  DDX_ERR_RUNTIME = 2,          /* validation or numeric failure */
  DDX_ERR_IO = 3                /* file missing, unreadable or unwritable */
} ddx_status;

/* Message for the most recent failure on this thread; never NULL. */
const char* ddx_last_error(void);

typedef struct ddx_vocab ddx_vocab;
typedef struct ddx_groups ddx_groups;
typedef struct ddx_graph ddx_graph;
typedef struct ddx_dataset ddx_dataset;
typedef struct ddx_clusters ddx_clusters;
typedef struct ddx_model ddx_model;
typedef struct ddx_report ddx_report;

/* ---- vocabulary ---- */

ddx_status ddx_vocab_load(const char* path, ddx_vocab** out);
ddx_status ddx_vocab_save(const ddx_vocab* vocab, const char* path);
/* Auto-named labels label_000.. for generated data. */
ddx_status ddx_vocab_synthetic(int32_t size, ddx_vocab** out);
int32_t ddx_vocab_size(const ddx_vocab* vocab);
/* Borrowed pointer, valid while the vocabulary lives; NULL if out of range. */
const char* ddx_vocab_label(const ddx_vocab* vocab, int32_t index);
void ddx_vocab_free(ddx_vocab* vocab);

/* ---- differential groups ---- */

/* annotator may be NULL/empty when the file holds exactly one annotator. */
ddx_status ddx_groups_load(const char* path, const char* annotator,
                           const ddx_vocab* vocab, ddx_groups** out);
int32_t ddx_groups_count(const ddx_groups* groups);
void ddx_groups_free(ddx_groups* groups);

/* ---- datasets ---- */

ddx_status ddx_dataset_load(const char* path, const ddx_vocab* vocab,
                            ddx_dataset** out);
ddx_status ddx_dataset_save(const ddx_dataset* dataset, const char* path);
int32_t ddx_dataset_size(const ddx_dataset* dataset);
int32_t ddx_dataset_feature_dim(const ddx_dataset* dataset);
void ddx_dataset_free(ddx_dataset* dataset);

/* ---- synthetic benchmark ---- */

typedef struct ddx_synth_config {
  int32_t label_count;
  int32_t cluster_count;
  int32_t feature_dim;
  int32_t train_n;
  int32_t test_n;
  double noise;
  /* P(complete label set has size k) = complete_size_probs[k-1]. */
  const double* complete_size_probs;
  int32_t complete_size_count;
  /* P(keep 1), P(keep 2), P(keep 3); remainder keeps the whole set. */
  double train_mask[3];
  double test_mask[3];
  uint64_t seed;
} ddx_synth_config;

/* Paper-shaped defaults (40 labels, 8 clusters, 0.817/0.155/0.028 train
 * mask, 0.460/0.381/0.127 test mask). */
ddx_status ddx_synth_config_default(ddx_synth_config* cfg);

/* Any out-pointer may be NULL when that piece is not needed. */
ddx_status ddx_synth_generate(const ddx_synth_config* cfg, ddx_vocab** vocab,
                              ddx_dataset** train, ddx_dataset** test,
                              ddx_clusters** true_groups);

/* ---- label graphs ---- */

ddx_status ddx_graph_cooccurrence(const ddx_dataset* dataset, double threshold,
                                  ddx_graph** out);
ddx_status ddx_graph_knowledge(const ddx_groups* a, const ddx_groups* b,
                               const ddx_vocab* vocab, ddx_graph** out);
ddx_status ddx_graph_random(int32_t size, double density, uint64_t seed,
                            ddx_graph** out);
ddx_status ddx_graph_load(const char* path, ddx_graph** out);
ddx_status ddx_graph_save(const ddx_graph* graph, const char* path);
int32_t ddx_graph_size(const ddx_graph* graph);
int64_t ddx_graph_edge_count(const ddx_graph* graph);
/* 1, 0, or -1 on bad arguments. */
int32_t ddx_graph_has_edge(const ddx_graph* graph, int32_t i, int32_t j);
void ddx_graph_free(ddx_graph* graph);

/* ---- models ---- */

typedef enum ddx_propagation_basis {
  DDX_PROPAGATION_POWER = 0,
  DDX_PROPAGATION_CHEBYSHEV = 1
} ddx_propagation_basis;

typedef struct ddx_gcn_config {
  int32_t embed_dim;   /* GCN-0 */
  int32_t hidden_dim;  /* GCN-1 */
  int32_t feature_dim; /* GCN-2 = image feature width */
  int32_t order1;
  int32_t order2;
  double leaky_slope;
  int32_t use_adapter; /* nonzero enables the trainable feature adapter */
  ddx_propagation_basis basis;
} ddx_gcn_config;

/* Paper defaults: 700/1024/2048, orders (1,2), slope 0.2, adapter on. */
ddx_status ddx_gcn_config_default(ddx_gcn_config* cfg);

/* embeddings_path may be NULL for seeded random GCN-0 input. */
ddx_status ddx_model_gcn_create(const ddx_gcn_config* cfg,
                                const ddx_vocab* vocab, uint64_t seed,
                                const char* embeddings_path, ddx_model** out);
ddx_status ddx_model_linear_create(const ddx_vocab* vocab, int32_t feature_dim,
                                   uint64_t seed, ddx_model** out);
ddx_status ddx_model_load(const char* path, ddx_model** out);
ddx_status ddx_model_save(const ddx_model* model, const char* path);
/* 1 for a GCN model, 0 for the linear baseline, -1 on bad handle. */
int32_t ddx_model_is_gcn(const ddx_model* model);
int64_t ddx_model_parameter_count(const ddx_model* model);
void ddx_model_free(ddx_model* model);

/* ---- training ---- */

typedef enum ddx_lr_schedule {
  DDX_LR_CONSTANT = 0,
  DDX_LR_STEP = 1
} ddx_lr_schedule;

typedef struct ddx_train_config {
  double learning_rate;
  int32_t epochs;
  int32_t batch_size;
  uint64_t seed;
  double weight_decay;
  ddx_lr_schedule schedule;
  double step_factor;
  int32_t step_every;
} ddx_train_config;

/* Paper defaults: lr 0.0003, 300 epochs, batch 32, constant schedule. */
ddx_status ddx_train_config_default(ddx_train_config* cfg);

/* graph is required for GCN models and ignored for the baseline.
 * loss_history, when non-NULL, receives cfg->epochs per-epoch mean losses. */
ddx_status ddx_model_train(ddx_model* model, const ddx_dataset* dataset,
                           const ddx_graph* graph,
                           const ddx_train_config* cfg, double* loss_history);

/* ---- evaluation ---- */

ddx_status ddx_model_evaluate(const ddx_model* model,
                              const ddx_dataset* dataset,
                              const ddx_graph* graph, double threshold,
                              ddx_report** out);
/* Evaluates an externally produced n x C score file (TSV). */
ddx_status ddx_scores_evaluate(const char* scores_path,
                               const ddx_dataset* dataset, double threshold,
                               ddx_report** out);
ddx_status ddx_model_top_n(const ddx_model* model, const ddx_dataset* dataset,
                           const ddx_graph* graph, int32_t n, double* out);
ddx_status ddx_scores_top_n(const char* scores_path,
                            const ddx_dataset* dataset, int32_t n,
                            double* out);

/* Keys: top1_acc, top3_acc, top5_acc, map, hamming_loss, ranking_loss,
 * one_error, n, C, threshold. */
ddx_status ddx_report_value(const ddx_report* report, const char* key,
                            double* out);
ddx_status ddx_report_save(const ddx_report* report, const char* path);
void ddx_report_free(ddx_report* report);

/* ---- node proximity ---- */

/* stage 0 = GCN-0 input (embeddings), 2 = GCN-2 output (classifier rows).
 * Writes rows*cols doubles row-major into out (capacity in doubles). */
ddx_status ddx_model_node_matrix(const ddx_model* model,
                                 const ddx_graph* graph, int32_t stage,
                                 double* out, int64_t capacity,
                                 int32_t* rows, int32_t* cols);

/* Centered-cosine proximity of all node pairs at the given stage; out holds
 * C*C doubles row-major. */
ddx_status ddx_model_proximity(const ddx_model* model, const ddx_graph* graph,
                               int32_t stage, double* out, int64_t capacity);

/* Connected components of proximity >= threshold. */
ddx_status ddx_proximity_clusters(const double* proximity, int32_t size,
                                  double threshold, ddx_clusters** out);

/* Full analysis: writes proximity_gcn0.tsv, proximity_gcn2.tsv,
 * proximity_delta.tsv, clusters_gcn0.tsv and clusters_gcn2.tsv under
 * out_dir. */
ddx_status ddx_model_proximity_export(const ddx_model* model,
                                      const ddx_graph* graph,
                                      const ddx_vocab* vocab,
                                      double cluster_threshold,
                                      const char* out_dir);

/* ---- cluster sets ---- */

int32_t ddx_clusters_count(const ddx_clusters* clusters);
/* Cluster id of a label, or -1. */
int32_t ddx_clusters_of(const ddx_clusters* clusters, int32_t label);
ddx_status ddx_clusters_save(const ddx_clusters* clusters,
                             const ddx_vocab* vocab, const char* path);
ddx_status ddx_clusters_load(const char* path, const ddx_vocab* vocab,
                             ddx_clusters** out);
void ddx_clusters_free(ddx_clusters* clusters);

#ifdef __cplusplus
}
#endif

#endif /* DDX_H */
