#include "repeval/core.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "repeval/parallel.hpp"

namespace repeval {

double squared_euclidean(const Matrix& x, Eigen::Index a, const Matrix& y,
                         Eigen::Index b) {
  double s = 0.0;
  for (Eigen::Index c = 0; c < x.cols(); ++c) {
    const double d = x(a, c) - y(b, c);
    s += d * d;
  }
  return s;
}

double row_distance(const Matrix& x, Eigen::Index a, const Matrix& y,
                    Eigen::Index b, Metric metric) {
  if (metric == Metric::Euclidean) return std::sqrt(squared_euclidean(x, a, y, b));
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (Eigen::Index c = 0; c < x.cols(); ++c) {
    dot += x(a, c) * y(b, c);
    na += x(a, c) * x(a, c);
    nb += y(b, c) * y(b, c);
  }
  if (na == 0.0 || nb == 0.0)
    throw Error(ErrorCode::ZeroNormRow, "cosine distance undefined for a zero-norm row");
  return 2.0 - 2.0 * dot / (std::sqrt(na) * std::sqrt(nb));
}

EmbeddingSet normalize_rows(const EmbeddingSet& e) {
  EmbeddingSet out{e.data};
  for (Eigen::Index i = 0; i < out.data.rows(); ++i) {
    const double norm = out.data.row(i).norm();
    if (norm == 0.0)
      throw Error(ErrorCode::ZeroNormRow,
                  "row " + std::to_string(i) + " has zero norm");
    out.data.row(i) /= norm;
  }
  return out;
}

NeighborTable knn_query(const EmbeddingSet& e, Eigen::Index k, Metric metric) {
  const Eigen::Index n = e.rows();
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "k must be at least 1");
  if (k >= n)
    throw Error(ErrorCode::KTooLarge, "k=" + std::to_string(k) + " requires more than " +
                                          std::to_string(n) + " points");
  const Matrix& x = e.data;

  std::vector<double> norm;
  if (metric == Metric::Cosine) {
    norm.resize(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
      double s = 0.0;
      for (Eigen::Index c = 0; c < x.cols(); ++c) s += x(i, c) * x(i, c);
      if (s == 0.0)
        throw Error(ErrorCode::ZeroNormRow,
                    "row " + std::to_string(i) + " has zero norm");
      norm[static_cast<std::size_t>(i)] = std::sqrt(s);
    }
  }

  NeighborTable table;
  table.indices.resize(n, k);
  table.distances.resize(n, k);

  const auto better = [](double d1, Eigen::Index j1, double d2, Eigen::Index j2) {
    return d1 < d2 || (d1 == d2 && j1 < j2);
  };

  parallel_for(static_cast<std::size_t>(n), [&](std::size_t row) {
    const auto i = static_cast<Eigen::Index>(row);
    std::vector<double> bd(static_cast<std::size_t>(k));
    std::vector<Eigen::Index> bj(static_cast<std::size_t>(k));
    Eigen::Index cnt = 0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j == i) continue;
      double d;
      if (metric == Metric::Euclidean) {
        d = std::sqrt(squared_euclidean(x, i, x, j));
      } else {
        double dot = 0.0;
        for (Eigen::Index c = 0; c < x.cols(); ++c) dot += x(i, c) * x(j, c);
        d = 2.0 - 2.0 * dot /
                      (norm[static_cast<std::size_t>(i)] * norm[static_cast<std::size_t>(j)]);
      }
      Eigen::Index p;
      if (cnt == k) {
        if (!better(d, j, bd[static_cast<std::size_t>(k - 1)],
                    bj[static_cast<std::size_t>(k - 1)]))
          continue;
        p = k - 1;
      } else {
        p = cnt++;
      }
      while (p > 0 && better(d, j, bd[static_cast<std::size_t>(p - 1)],
                             bj[static_cast<std::size_t>(p - 1)])) {
        bd[static_cast<std::size_t>(p)] = bd[static_cast<std::size_t>(p - 1)];
        bj[static_cast<std::size_t>(p)] = bj[static_cast<std::size_t>(p - 1)];
        --p;
      }
      bd[static_cast<std::size_t>(p)] = d;
      bj[static_cast<std::size_t>(p)] = j;
    }
    for (Eigen::Index c = 0; c < k; ++c) {
      table.indices(i, c) = bj[static_cast<std::size_t>(c)];
      table.distances(i, c) = bd[static_cast<std::size_t>(c)];
    }
  });
  return table;
}

}  // namespace repeval
