#pragma once

#include "repeval/types.hpp"

#include <cstdint>

namespace repeval {

enum class SynthKind { HypercubeManifold, GaussianBlobs, LinearSubspace };

struct SynthSpec {
  SynthKind kind = SynthKind::HypercubeManifold;
  Eigen::Index n = 0;
  Eigen::Index intrinsic_dim = 0;
  Eigen::Index ambient_dim = 0;
  int n_blobs = 1;
  double separation = 0.0;
  double sigma = 1.0;
  std::uint64_t seed = 0;
};

struct BlobData {
  EmbeddingSet points;
  std::vector<int> labels;
};

// Haar-distributed orthonormal ambient x intrinsic map (QR of a Gaussian
// matrix with the sign fix), so embeddings are isometries.
Matrix random_orthonormal_map(Eigen::Index ambient, Eigen::Index intrinsic,
                              std::uint64_t seed);

// n points uniform on the unit cube of the intrinsic dimension, isometrically
// embedded with a random offset. intrinsic == ambient skips the embedding.
// Throws DimMismatch.
EmbeddingSet gen_hypercube_manifold(const SynthSpec& spec);

// Gaussian blobs: centers at seeded random unit directions of the intrinsic
// space scaled by separation, isotropic noise sigma, block-ordered labels,
// sizes split evenly; embedded isometrically when intrinsic < ambient.
BlobData gen_gaussian_blobs(const SynthSpec& spec);

// Standard Gaussian in the intrinsic space mapped through the orthonormal
// embedding. Throws DimMismatch.
EmbeddingSet gen_linear_subspace(const SynthSpec& spec);

}  // namespace repeval
