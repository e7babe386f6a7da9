#include "repeval/clustering.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "repeval/core.hpp"
#include "repeval/parallel.hpp"
#include "repeval/rng.hpp"

namespace repeval {

namespace {

// squared Euclidean distances from every row of x to one centroid row,
// via the expansion ||x||^2 - 2 x.c + ||c||^2, clamped at zero
void distances_to_centroid(const Matrix& x, const Eigen::VectorXd& xsq,
                           const Eigen::RowVectorXd& c, Eigen::VectorXd& out) {
  const double csq = c.squaredNorm();
  out.noalias() = x * c.transpose();
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    double d = xsq(i) - 2.0 * out(i) + csq;
    out(i) = d < 0.0 ? 0.0 : d;
  }
}

}  // namespace

Partition kmeans(const EmbeddingSet& e, int k, Metric metric, std::uint64_t seed,
                 const KMeansOptions& opts) {
  const Eigen::Index n = e.rows();
  if (k < 1 || static_cast<Eigen::Index>(k) > n)
    throw Error(ErrorCode::KOutOfRange,
                "k=" + std::to_string(k) + " is outside [1, " + std::to_string(n) + "]");

  const Matrix x = metric == Metric::Cosine ? normalize_rows(e).data : e.data;
  const Eigen::Index m = x.cols();

  Eigen::VectorXd xsq(n);
  for (Eigen::Index i = 0; i < n; ++i) xsq(i) = x.row(i).squaredNorm();

  // ---- k-means++ seeding ----
  Rng rng(seed);
  Matrix centroids(k, m);
  std::vector<char> taken(static_cast<std::size_t>(n), 0);
  Eigen::VectorXd weight = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd scratch(n);
  {
    const auto first =
        static_cast<Eigen::Index>(rng.next_below(static_cast<std::uint64_t>(n)));
    centroids.row(0) = x.row(first);
    taken[static_cast<std::size_t>(first)] = 1;
    distances_to_centroid(x, xsq, centroids.row(0), weight);
    for (int c = 1; c < k; ++c) {
      double total = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) total += weight(i);
      Eigen::Index pick = -1;
      if (total > 0.0) {
        const double r = rng.next_double() * total;
        double cum = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
          cum += weight(i);
          if (cum > r) {
            pick = i;
            break;
          }
        }
        if (pick < 0)
          for (Eigen::Index i = n - 1; i >= 0; --i)
            if (weight(i) > 0.0) {
              pick = i;
              break;
            }
      }
      if (pick < 0)
        for (Eigen::Index i = 0; i < n; ++i)
          if (!taken[static_cast<std::size_t>(i)]) {
            pick = i;
            break;
          }
      taken[static_cast<std::size_t>(pick)] = 1;
      centroids.row(c) = x.row(pick);
      distances_to_centroid(x, xsq, centroids.row(c), scratch);
      for (Eigen::Index i = 0; i < n; ++i)
        if (scratch(i) < weight(i)) weight(i) = scratch(i);
    }
  }

  // ---- Lloyd iterations ----
  Partition part;
  part.k = k;
  part.labels.assign(static_cast<std::size_t>(n), 0);
  std::vector<double> mind(static_cast<std::size_t>(n), 0.0);
  Eigen::VectorXd csq(k);

  for (int iter = 1; iter <= opts.max_iter; ++iter) {
    Matrix dots = x * centroids.transpose();  // n x k
    for (int j = 0; j < k; ++j) csq(j) = centroids.row(j).squaredNorm();
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t row) {
      const auto i = static_cast<Eigen::Index>(row);
      int best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (int j = 0; j < k; ++j) {
        double d = xsq(i) - 2.0 * dots(i, j) + csq(j);
        if (d < 0.0) d = 0.0;
        if (d < best_d) {
          best_d = d;
          best = j;
        }
      }
      part.labels[row] = best;
      mind[row] = best_d;
    });

    // revive empty clusters at the point farthest from its assigned centroid
    bool repaired = false;
    {
      std::vector<Eigen::Index> count(static_cast<std::size_t>(k), 0);
      for (Eigen::Index i = 0; i < n; ++i)
        ++count[static_cast<std::size_t>(part.labels[static_cast<std::size_t>(i)])];
      for (int j = 0; j < k; ++j) {
        if (count[static_cast<std::size_t>(j)] > 0) continue;
        Eigen::Index far = -1;
        double far_d = -1.0;
        for (Eigen::Index i = 0; i < n; ++i) {
          const int l = part.labels[static_cast<std::size_t>(i)];
          if (count[static_cast<std::size_t>(l)] < 2) continue;
          if (mind[static_cast<std::size_t>(i)] > far_d) {
            far_d = mind[static_cast<std::size_t>(i)];
            far = i;
          }
        }
        if (far < 0) continue;
        --count[static_cast<std::size_t>(part.labels[static_cast<std::size_t>(far)])];
        part.labels[static_cast<std::size_t>(far)] = j;
        count[static_cast<std::size_t>(j)] = 1;
        centroids.row(j) = x.row(far);
        mind[static_cast<std::size_t>(far)] = 0.0;
        repaired = true;
      }
    }

    double inertia = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) inertia += mind[static_cast<std::size_t>(i)];
    part.inertia_history.push_back(inertia);
    part.inertia = inertia;
    part.n_iter = iter;

    // update step
    Matrix sums = Matrix::Zero(k, m);
    std::vector<Eigen::Index> count(static_cast<std::size_t>(k), 0);
    for (Eigen::Index i = 0; i < n; ++i) {
      const int l = part.labels[static_cast<std::size_t>(i)];
      sums.row(l) += x.row(i);
      ++count[static_cast<std::size_t>(l)];
    }
    double shift = 0.0;
    for (int j = 0; j < k; ++j) {
      Eigen::RowVectorXd next = centroids.row(j);
      if (count[static_cast<std::size_t>(j)] > 0) {
        next = sums.row(j) / static_cast<double>(count[static_cast<std::size_t>(j)]);
        if (metric == Metric::Cosine) {
          const double norm = next.norm();
          if (norm > 0.0)
            next /= norm;
          else
            next = centroids.row(j);
        }
      }
      shift += (next - centroids.row(j)).norm();
      centroids.row(j) = next;
    }
    shift /= static_cast<double>(k);

    if (shift < opts.tol && !repaired) break;
  }

  part.centroids = std::move(centroids);
  return part;
}

}  // namespace repeval
