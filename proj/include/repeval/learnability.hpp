#pragma once

#include "repeval/clustering.hpp"
#include "repeval/types.hpp"

#include <optional>

namespace repeval {

struct PrequentialConfig {
  int n_neighbors = 1;
  Eigen::Index chunk_size = 1000;
  std::uint64_t seed = 0;
  double smoothing = 1.0;
};

struct PrequentialResult {
  double cl = 0.0;          // mean of per-chunk accuracies
  double codelength = 0.0;  // nats
  std::vector<double> per_chunk_accuracy;
  std::size_t n_predictions = 0;
};

// Online nearest-neighbor accuracy of the labels: rows are permuted by the
// seeded permutation and split into consecutive chunks (short trailing chunk
// kept if it has >= 2 points); within a chunk, point i is predicted by
// majority vote of its min(n_neighbors, i-1) nearest previously seen points
// (distance ties -> earlier position, vote ties -> smallest label); the
// first point of each chunk is unscored. Codelength accumulates
// -log[(votes_for_true + s) / (votes + s*K)] over scored points.
// Throws LabelLengthMismatch, EmptyAfterChunking.
PrequentialResult prequential_knn(const EmbeddingSet& e,
                                  const std::vector<int>& labels,
                                  Metric metric,
                                  const PrequentialConfig& cfg);

// Scores several labelings of the same rows in one neighbor scan; every
// labeling shares cfg's permutation, chunking, and smoothing. Entry [v][u] of
// the result equals prequential_knn(e, labelings[v], metric, cfg) with
// n_neighbors = neighbor_counts[u] (cfg.n_neighbors itself is ignored).
std::vector<std::vector<PrequentialResult>> prequential_knn_grid(
    const EmbeddingSet& e, const std::vector<std::vector<int>>& labelings,
    const std::vector<int>& neighbor_counts, Metric metric,
    const PrequentialConfig& cfg);

struct ClResult {
  PrequentialResult preq;
  Partition partition;
};

// Clusters the embeddings (n_clusters <= 0 means ceil(sqrt(N))) and scores
// the resulting pseudo-labels with prequential_knn.
ClResult cluster_learnability(const EmbeddingSet& e, Metric metric,
                              int n_clusters, const PrequentialConfig& cfg,
                              std::uint64_t kmeans_seed,
                              const KMeansOptions& kopts = {});

}  // namespace repeval
