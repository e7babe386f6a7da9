#pragma once

#include "repeval/types.hpp"

namespace repeval {

// Squared Euclidean distance between rows a and b, plain sequential
// accumulation (bitwise reproducible).
double squared_euclidean(const Matrix& x, Eigen::Index a, const Matrix& x2,
                         Eigen::Index b);

// Distance between two rows under the metric. Cosine distance is
// 2 - 2*cos(a, b) and requires both rows to have nonzero norm.
double row_distance(const Matrix& x, Eigen::Index a, const Matrix& y,
                    Eigen::Index b, Metric metric);

// Scales every row to unit Euclidean norm. Throws ZeroNormRow.
EmbeddingSet normalize_rows(const EmbeddingSet& e);

// Exact k nearest neighbors of every row (self excluded), ties broken by
// lower row index. Throws KTooLarge if k >= N, ZeroNormRow for cosine on a
// zero-norm row.
NeighborTable knn_query(const EmbeddingSet& e, Eigen::Index k, Metric metric);

}  // namespace repeval
