#pragma once

// Brute-force reference implementations used to cross-check the library.
// Everything here is deliberately naive -- full sorts, O(N^2) double loops,
// dense eigen-decompositions -- and must stay independent of the library
// code paths it checks.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "repeval/types.hpp"

namespace oracle {

using repeval::Matrix;
using repeval::Metric;

// Test-data generator. Uses std::mt19937_64 (a different generator family
// than the library's) with an explicit 53-bit double conversion.
class TestRng {
 public:
  explicit TestRng(std::uint64_t seed) : gen_(seed) {}
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 1.0 - uniform();
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double th = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(th);
    have_spare_ = true;
    return r * std::cos(th);
  }
  std::uint64_t below(std::uint64_t bound) { return gen_() % bound; }

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

inline Matrix random_matrix(std::uint64_t seed, int n, int m, bool gaussian = true) {
  TestRng rng(seed);
  Matrix x(n, m);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) x(i, j) = gaussian ? rng.gaussian() : rng.uniform();
  return x;
}

inline double pair_distance(const Matrix& x, int i, int j, Metric metric) {
  if (metric == Metric::Euclidean) {
    double s = 0.0;
    for (int c = 0; c < x.cols(); ++c) {
      double d = x(i, c) - x(j, c);
      s += d * d;
    }
    return std::sqrt(s);
  }
  double dot = 0.0, ni = 0.0, nj = 0.0;
  for (int c = 0; c < x.cols(); ++c) {
    dot += x(i, c) * x(j, c);
    ni += x(i, c) * x(i, c);
    nj += x(j, c) * x(j, c);
  }
  return 2.0 - 2.0 * dot / (std::sqrt(ni) * std::sqrt(nj));
}

struct KnnRow {
  std::vector<int> indices;
  std::vector<double> distances;
};

// Full-sort exact nearest neighbors, ties broken by lower index.
inline std::vector<KnnRow> knn(const Matrix& x, int k, Metric metric) {
  const int n = static_cast<int>(x.rows());
  std::vector<KnnRow> out(n);
  for (int i = 0; i < n; ++i) {
    std::vector<std::pair<double, int>> cand;
    cand.reserve(n - 1);
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      cand.emplace_back(pair_distance(x, i, j, metric), j);
    }
    std::sort(cand.begin(), cand.end());
    out[i].indices.resize(k);
    out[i].distances.resize(k);
    for (int j = 0; j < k; ++j) {
      out[i].indices[j] = cand[j].second;
      out[i].distances[j] = cand[j].first;
    }
  }
  return out;
}

inline double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const size_t n = x.size();
  double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (size_t i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

// Tie-corrected Kendall tau by O(M^2) pair enumeration. Pairs tied in both
// vectors count toward neither tie term.
inline double kendall_b(const std::vector<double>& x, const std::vector<double>& y) {
  const size_t n = x.size();
  long long nc = 0, nd = 0, tx = 0, ty = 0;
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) {
      double dx = x[i] - x[j], dy = y[i] - y[j];
      if (dx == 0.0 && dy == 0.0) continue;
      if (dx == 0.0) {
        ++tx;
      } else if (dy == 0.0) {
        ++ty;
      } else if ((dx > 0.0) == (dy > 0.0)) {
        ++nc;
      } else {
        ++nd;
      }
    }
  }
  double denom = std::sqrt(static_cast<double>(nc + nd + tx)) *
                 std::sqrt(static_cast<double>(nc + nd + ty));
  return static_cast<double>(nc - nd) / denom;
}

// Coding rate via the eigenvalues of the feature Gram: 1/2 sum log(1 + a*l_i).
inline double coding_rate_eig(const Matrix& z, double eps_sq) {
  const double n = static_cast<double>(z.rows());
  const double m = static_cast<double>(z.cols());
  Eigen::MatrixXd gram = z.transpose() * z;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
  double alpha = m / (n * eps_sq);
  double r = 0.0;
  for (int i = 0; i < es.eigenvalues().size(); ++i) {
    double lam = std::max(0.0, es.eigenvalues()[i]);
    r += std::log(1.0 + alpha * lam);
  }
  return 0.5 * r;
}

inline double conditional_coding_rate_eig(const Matrix& z, const std::vector<int>& labels,
                                          int k, double eps_sq) {
  const double n = static_cast<double>(z.rows());
  double total = 0.0;
  for (int c = 0; c < k; ++c) {
    std::vector<int> rows;
    for (int i = 0; i < static_cast<int>(labels.size()); ++i)
      if (labels[i] == c) rows.push_back(i);
    if (rows.empty()) continue;
    Matrix zc(rows.size(), z.cols());
    for (size_t r = 0; r < rows.size(); ++r) zc.row(r) = z.row(rows[r]);
    total += (static_cast<double>(rows.size()) / n) * coding_rate_eig(zc, eps_sq);
  }
  return total;
}

inline Matrix normalized(const Matrix& x) {
  Matrix out = x;
  for (int i = 0; i < x.rows(); ++i) out.row(i) /= x.row(i).norm();
  return out;
}

inline double alignment(const Matrix& a, const Matrix& b, double alpha, bool normalize) {
  Matrix an = normalize ? normalized(a) : a;
  Matrix bn = normalize ? normalized(b) : b;
  double s = 0.0;
  for (int i = 0; i < an.rows(); ++i)
    s += std::pow((an.row(i) - bn.row(i)).norm(), alpha);
  return s / static_cast<double>(an.rows());
}

// Exact all-pairs uniformity with a two-pass log-sum-exp.
inline double uniformity(const Matrix& x, double t) {
  Matrix z = normalized(x);
  const int n = static_cast<int>(z.rows());
  std::vector<double> vals;
  vals.reserve(static_cast<size_t>(n) * (n - 1) / 2);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      vals.push_back(-t * (z.row(i) - z.row(j)).squaredNorm());
  double mx = *std::max_element(vals.begin(), vals.end());
  double s = 0.0;
  for (double v : vals) s += std::exp(v - mx);
  return mx + std::log(s) - std::log(static_cast<double>(vals.size()));
}

// Least-squares on the 3-column design [u, v, 1] via SVD pseudoinverse.
inline std::array<double, 3> ols3_svd(const std::vector<double>& u, const std::vector<double>& v,
                                      const std::vector<double>& y) {
  const int n = static_cast<int>(u.size());
  Eigen::MatrixXd a(n, 3);
  Eigen::VectorXd b(n);
  for (int i = 0; i < n; ++i) {
    a(i, 0) = u[i];
    a(i, 1) = v[i];
    a(i, 2) = 1.0;
    b(i) = y[i];
  }
  Eigen::VectorXd w = a.jacobiSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(b);
  return {w(0), w(1), w(2)};
}

// Adjusted Rand index between two labelings.
inline double ari(const std::vector<int>& a, const std::vector<int>& b) {
  auto comb2 = [](double x) { return x * (x - 1.0) / 2.0; };
  std::map<std::pair<int, int>, double> cont;
  std::map<int, double> ra, rb;
  for (size_t i = 0; i < a.size(); ++i) {
    cont[{a[i], b[i]}] += 1.0;
    ra[a[i]] += 1.0;
    rb[b[i]] += 1.0;
  }
  double sum_ij = 0.0, sum_a = 0.0, sum_b = 0.0;
  for (auto& kv : cont) sum_ij += comb2(kv.second);
  for (auto& kv : ra) sum_a += comb2(kv.second);
  for (auto& kv : rb) sum_b += comb2(kv.second);
  double total = comb2(static_cast<double>(a.size()));
  double expected = sum_a * sum_b / total;
  double max_index = 0.5 * (sum_a + sum_b);
  if (max_index == expected) return 1.0;
  return (sum_ij - expected) / (max_index - expected);
}

} // namespace oracle
