#pragma once

#include "repeval/clustering.hpp"
#include "repeval/types.hpp"

namespace repeval {

struct AlignUnifParams {
  double alpha = 2.0;
  double t = 2.0;
  std::size_t pair_budget = 1000000;  // uniformity pairs before subsampling
  bool exact_pairs = false;           // force the full pair sum
  std::uint64_t pair_seed = 0;
  bool normalize_alignment = true;    // unit-normalize rows before the gap
};

struct UniformityResult {
  double value = 0.0;
  std::size_t n_pairs = 0;
  bool exact = true;
};

struct PairedEmbeddings {
  EmbeddingSet view_a;
  EmbeddingSet view_b;  // same shape; row i pairs with row i of view_a
};

// Mean alpha-power gap between paired rows. Throws ShapeMismatch, ZeroNormRow.
double alignment_loss(const PairedEmbeddings& p, const AlignUnifParams& params);

// log mean over distinct unordered pairs of exp(-t * squared gap) on
// unit-normalized rows, log-sum-exp stabilized; pairs beyond the budget are
// subsampled with the seed. Throws TooFewPoints, ZeroNormRow.
UniformityResult uniformity_loss(const EmbeddingSet& e,
                                 const AlignUnifParams& params);

// -(alignment + uniformity); higher is better.
double contrastive_score(const PairedEmbeddings& p,
                         const AlignUnifParams& params);

struct CodingRateParams {
  double eps_sq = 0.5;
};

// Half log-determinant rate of the feature Gram:
// 0.5 * logdet(I_m + (m/(N*eps^2)) * Z^T Z) over rows Z. Throws
// NonFiniteLogDet.
double coding_rate(const EmbeddingSet& e, const CodingRateParams& params);

// Partition-conditional rate: sum over clusters of
// (N_j / 2N) * logdet(I_m + (m/(N_j*eps^2)) * Z_j^T Z_j).
// Throws LabelLengthMismatch.
double coding_rate_conditional(const EmbeddingSet& e, const Partition& part,
                               const CodingRateParams& params);

// Rate reduction of the partition on row-normalized features.
double mcr2_delta(const EmbeddingSet& e, const Partition& part,
                  const CodingRateParams& params);

// Majority-vote nearest-neighbor accuracy on a held-out set (distance ties ->
// lower train row, vote ties -> smallest label). Throws ShapeMismatch,
// KTooLarge, LabelLengthMismatch.
double pretext_knn_accuracy(const EmbeddingSet& train,
                            const std::vector<int>& train_labels,
                            const EmbeddingSet& test,
                            const std::vector<int>& test_labels, int k,
                            Metric metric);

}  // namespace repeval
