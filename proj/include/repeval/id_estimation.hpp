#pragma once

#include "repeval/types.hpp"

namespace repeval {

struct TwoNNFit {
  std::vector<double> mu;     // sorted ascending, retained after discard
  std::vector<double> f_emp;  // positional cumulative value per retained entry
  double id = 0.0;            // zero-intercept slope
  std::size_t n_used = 0;     // fit points that actually entered the slope
  double discard_fraction = 0.0;
  std::size_t n_duplicates_dropped = 0;  // filled by twonn_id
};

struct LocalIdEstimate {
  std::vector<double> local_id;     // per-point estimate
  double global_id = 0.0;           // pooled estimate
  int k = 0;
  std::vector<double> log_density;  // per-point log-density (entropy runs)
  double entropy = 0.0;             // nats
  std::vector<double> t_k;          // distance to the k-th neighbor
  std::size_t n_excluded = 0;       // points dropped for zero distances
};

// Fits the neighbor-ratio tail law: sorts mu ascending, drops the
// ceil(discard_fraction*N) largest, takes cumulative values i/N over the
// retained prefix, and regresses -log(1 - F) on log(mu) through the origin.
// Non-finite fit points are excluded. Throws TooFewPoints, DegenerateRatios.
TwoNNFit twonn_fit_from_ratios(std::vector<double> mu, double discard_fraction);

// Two-nearest-neighbor intrinsic dimension of an embedding set. Duplicate
// points (first neighbor closer than 1e-12) are dropped with a counter.
// Throws TooFewPoints if fewer than 3 usable points remain.
TwoNNFit twonn_id(const EmbeddingSet& e, Metric metric,
                  double discard_fraction = 0.1);

enum class IdPooling { Arithmetic, Harmonic };

// Per-point likelihood-based local intrinsic dimension from the first k
// neighbor distances; global estimate pools the local ones. Points with any
// zero distance among the first k-1 neighbors are excluded and counted.
// Throws ZeroDistance if nothing survives.
LocalIdEstimate mle_local_id(const NeighborTable& table, int k,
                             IdPooling pooling = IdPooling::Arithmetic);

// Differential entropy from k-th-neighbor distances (nats): per point,
// log-density = digamma(k) - log N - D*log T_k - log V(D) with D the
// harmonically pooled local id and V the unit-ball volume (log-Gamma form);
// entropy is minus the mean log-density. global_id of the result is the
// pooled D so the scaling identity H(s*X) - H(X) = global_id*log(s) is
// exact. Throws ZeroDistance on duplicate points, NumericOverflow if the
// volume term is non-finite.
LocalIdEstimate knn_entropy(const EmbeddingSet& e, int k, Metric metric);

}  // namespace repeval
