#pragma once

#include "repeval/types.hpp"

namespace repeval {

struct Partition {
  std::vector<int> labels;  // in [0, k), every cluster nonempty
  int k = 0;
  Matrix centroids;         // k x m
  double inertia = 0.0;     // sum of squared Euclidean / cosine distances
  int n_iter = 0;
  std::vector<double> inertia_history;  // after each assignment pass
};

struct KMeansOptions {
  int max_iter = 100;
  double tol = 1e-4;  // on mean centroid displacement
};

// Seeded k-means++ then Lloyd iterations; cosine runs as the spherical
// variant (rows and centroids normalized). Empty clusters are reseeded at
// the point farthest from its assigned centroid. Deterministic given
// (inputs, seed), independent of thread count. Throws KOutOfRange.
Partition kmeans(const EmbeddingSet& e, int k, Metric metric,
                 std::uint64_t seed, const KMeansOptions& opts = {});

}  // namespace repeval
