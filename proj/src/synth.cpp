#include "repeval/synth.hpp"

#include <Eigen/QR>
#include <cmath>
#include <string>

#include "repeval/rng.hpp"

namespace repeval {

namespace {

Matrix gaussian_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  Matrix g(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) g(i, j) = rng.next_gaussian();
  return g;
}

// Orthonormal columns from a QR factorization of a Gaussian draw, with the
// sign of each column fixed so the map does not depend on the factorization's
// sign convention.
Matrix orthonormal_from_rng(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  const Matrix g = gaussian_matrix(rng, rows, cols);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(rows, cols);
  const Eigen::MatrixXd r =
      qr.matrixQR().topRows(cols).triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < cols; ++j)
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  return q;
}

void check_dims(const SynthSpec& spec) {
  if (spec.n < 1)
    throw Error(ErrorCode::InvalidArgument, "need at least one point");
  if (spec.intrinsic_dim < 1 || spec.ambient_dim < 1)
    throw Error(ErrorCode::InvalidArgument, "dimensions must be at least 1");
  if (spec.intrinsic_dim > spec.ambient_dim)
    throw Error(ErrorCode::DimMismatch,
                "intrinsic dimension " + std::to_string(spec.intrinsic_dim) +
                    " exceeds ambient dimension " + std::to_string(spec.ambient_dim));
}

}  // namespace

Matrix random_orthonormal_map(Eigen::Index ambient, Eigen::Index intrinsic,
                              std::uint64_t seed) {
  if (intrinsic < 1 || ambient < intrinsic)
    throw Error(ErrorCode::DimMismatch,
                "cannot embed " + std::to_string(intrinsic) + " dimensions into " +
                    std::to_string(ambient));
  Rng rng(seed);
  return orthonormal_from_rng(rng, ambient, intrinsic);
}

EmbeddingSet gen_hypercube_manifold(const SynthSpec& spec) {
  check_dims(spec);
  Rng rng(spec.seed);
  Matrix u(spec.n, spec.intrinsic_dim);
  for (Eigen::Index i = 0; i < spec.n; ++i)
    for (Eigen::Index j = 0; j < spec.intrinsic_dim; ++j) u(i, j) = rng.next_double();

  EmbeddingSet out;
  if (spec.intrinsic_dim == spec.ambient_dim) {
    out.data = std::move(u);
    return out;
  }
  const Matrix q = orthonormal_from_rng(rng, spec.ambient_dim, spec.intrinsic_dim);
  Eigen::RowVectorXd offset(spec.ambient_dim);
  for (Eigen::Index j = 0; j < spec.ambient_dim; ++j) offset(j) = rng.next_gaussian();
  out.data = u * q.transpose();
  out.data.rowwise() += offset;
  return out;
}

BlobData gen_gaussian_blobs(const SynthSpec& spec) {
  check_dims(spec);
  if (spec.n_blobs < 1)
    throw Error(ErrorCode::InvalidArgument, "need at least one blob");
  if (spec.n < spec.n_blobs)
    throw Error(ErrorCode::InvalidArgument, "fewer points than blobs");

  Rng rng(spec.seed);
  const Eigen::Index d = spec.intrinsic_dim;

  // unit directions scaled to the requested separation
  Matrix centers(spec.n_blobs, d);
  for (Eigen::Index b = 0; b < spec.n_blobs; ++b) {
    Eigen::RowVectorXd dir(d);
    double norm = 0.0;
    do {
      for (Eigen::Index j = 0; j < d; ++j) dir(j) = rng.next_gaussian();
      norm = dir.norm();
    } while (norm < 1e-9);
    centers.row(b) = dir / norm * spec.separation;
  }

  const Eigen::Index base = spec.n / spec.n_blobs;
  const Eigen::Index rem = spec.n % spec.n_blobs;
  Matrix x(spec.n, d);
  BlobData out;
  out.labels.resize(static_cast<std::size_t>(spec.n));
  Eigen::Index row = 0;
  for (Eigen::Index b = 0; b < spec.n_blobs; ++b) {
    const Eigen::Index size = base + (b < rem ? 1 : 0);
    for (Eigen::Index p = 0; p < size; ++p, ++row) {
      for (Eigen::Index j = 0; j < d; ++j)
        x(row, j) = rng.next_gaussian() * spec.sigma + centers(b, j);
      out.labels[static_cast<std::size_t>(row)] = static_cast<int>(b);
    }
  }

  if (d == spec.ambient_dim) {
    out.points.data = std::move(x);
  } else {
    const Matrix q = orthonormal_from_rng(rng, spec.ambient_dim, d);
    out.points.data = x * q.transpose();
  }
  return out;
}

EmbeddingSet gen_linear_subspace(const SynthSpec& spec) {
  check_dims(spec);
  Rng rng(spec.seed);
  const Matrix g = gaussian_matrix(rng, spec.n, spec.intrinsic_dim);
  const Matrix q = orthonormal_from_rng(rng, spec.ambient_dim, spec.intrinsic_dim);
  EmbeddingSet out;
  out.data = g * q.transpose();
  return out;
}

}  // namespace repeval
