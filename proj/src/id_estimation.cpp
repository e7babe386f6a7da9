#include "repeval/id_estimation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "repeval/core.hpp"

namespace repeval {

namespace {

constexpr double kEulerGamma = 0.57721566490153286060651209008240243;

double digamma_int(int k) {
  double s = -kEulerGamma;
  for (int i = 1; i < k; ++i) s += 1.0 / i;
  return s;
}

// log volume of the unit ball in dimension d
double log_ball_volume(double d) {
  return 0.5 * d * std::log(std::numbers::pi) - std::lgamma(0.5 * d + 1.0);
}

}  // namespace

TwoNNFit twonn_fit_from_ratios(std::vector<double> mu, double discard_fraction) {
  if (discard_fraction < 0.0 || discard_fraction >= 1.0)
    throw Error(ErrorCode::InvalidArgument, "discard fraction must lie in [0, 1)");
  const std::size_t n = mu.size();
  if (n == 0) throw Error(ErrorCode::TooFewPoints, "no neighbor ratios given");

  std::sort(mu.begin(), mu.end());
  const auto n_drop =
      static_cast<std::size_t>(std::ceil(discard_fraction * static_cast<double>(n)));
  if (n_drop >= n)
    throw Error(ErrorCode::TooFewPoints, "discard fraction leaves no ratios");
  mu.resize(n - n_drop);

  TwoNNFit fit;
  fit.discard_fraction = discard_fraction;
  fit.f_emp.resize(mu.size());
  for (std::size_t i = 0; i < mu.size(); ++i)
    fit.f_emp[i] = static_cast<double>(i + 1) / static_cast<double>(n);

  double sxx = 0.0, sxy = 0.0;
  std::size_t used = 0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (!(mu[i] > 0.0)) continue;
    const double x = std::log(mu[i]);
    const double y = -std::log1p(-fit.f_emp[i]);
    if (!std::isfinite(x) || !std::isfinite(y)) continue;
    sxx += x * x;
    sxy += x * y;
    ++used;
  }
  if (used == 0)
    throw Error(ErrorCode::TooFewPoints, "no usable ratios for the fit");
  if (sxx == 0.0)
    throw Error(ErrorCode::DegenerateRatios, "all neighbor ratios equal one");

  fit.mu = std::move(mu);
  fit.id = sxy / sxx;
  fit.n_used = used;
  return fit;
}

TwoNNFit twonn_id(const EmbeddingSet& e, Metric metric, double discard_fraction) {
  if (e.rows() < 3)
    throw Error(ErrorCode::TooFewPoints, "need at least 3 points");
  const NeighborTable table = knn_query(e, 2, metric);

  std::vector<double> mu;
  mu.reserve(static_cast<std::size_t>(e.rows()));
  std::size_t dropped = 0;
  for (Eigen::Index i = 0; i < e.rows(); ++i) {
    const double r1 = table.distances(i, 0);
    const double r2 = table.distances(i, 1);
    if (r1 < 1e-12) {
      ++dropped;
      continue;
    }
    mu.push_back(r2 / r1);
  }
  if (mu.size() < 3)
    throw Error(ErrorCode::TooFewPoints,
                "fewer than 3 points left after dropping duplicates");

  TwoNNFit fit = twonn_fit_from_ratios(std::move(mu), discard_fraction);
  fit.n_duplicates_dropped = dropped;
  return fit;
}

LocalIdEstimate mle_local_id(const NeighborTable& table, int k, IdPooling pooling) {
  if (k < 2) throw Error(ErrorCode::KOutOfRange, "k must be at least 2");
  if (k > table.k())
    throw Error(ErrorCode::KOutOfRange,
                "k=" + std::to_string(k) + " exceeds the neighbor table width " +
                    std::to_string(table.k()));

  const Eigen::Index n = table.rows();
  LocalIdEstimate out;
  out.k = k;
  out.local_id.assign(static_cast<std::size_t>(n),
                      std::numeric_limits<double>::quiet_NaN());
  out.t_k.resize(static_cast<std::size_t>(n));

  double inv_sum = 0.0, sum = 0.0;
  std::size_t included = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double tk = table.distances(i, k - 1);
    out.t_k[static_cast<std::size_t>(i)] = tk;
    double denom = 0.0;
    bool zero = false;
    for (int j = 0; j < k - 1; ++j) {
      const double tj = table.distances(i, j);
      if (tj <= 0.0) {
        zero = true;
        break;
      }
      denom += std::log(tk / tj);
    }
    if (zero) {
      ++out.n_excluded;
      continue;
    }
    const double d = static_cast<double>(k - 1) / denom;
    out.local_id[static_cast<std::size_t>(i)] = d;
    sum += d;
    inv_sum += 1.0 / d;
    ++included;
  }
  if (included == 0)
    throw Error(ErrorCode::ZeroDistance, "every point has a zero-distance neighbor");

  out.global_id = pooling == IdPooling::Harmonic
                      ? static_cast<double>(included) / inv_sum
                      : sum / static_cast<double>(included);
  return out;
}

LocalIdEstimate knn_entropy(const EmbeddingSet& e, int k, Metric metric) {
  if (k < 2) throw Error(ErrorCode::KOutOfRange, "k must be at least 2");
  const Eigen::Index n = e.rows();
  const NeighborTable table = knn_query(e, k, metric);
  for (Eigen::Index i = 0; i < n; ++i)
    for (int j = 0; j < k; ++j)
      if (table.distances(i, j) <= 0.0)
        throw Error(ErrorCode::ZeroDistance,
                    "point " + std::to_string(i) + " has a zero-distance neighbor");

  LocalIdEstimate out = mle_local_id(table, k, IdPooling::Harmonic);
  const double d_bar = out.global_id;
  const double log_volume = log_ball_volume(d_bar);
  if (!std::isfinite(log_volume))
    throw Error(ErrorCode::NumericOverflow, "ball volume overflows at dimension " +
                                                std::to_string(d_bar));

  const double base = digamma_int(k) - std::log(static_cast<double>(n)) - log_volume;
  out.log_density.resize(static_cast<std::size_t>(n));
  double acc = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double lf =
        base - d_bar * std::log(table.distances(i, k - 1));
    out.log_density[static_cast<std::size_t>(i)] = lf;
    acc += lf;
  }
  out.entropy = -acc / static_cast<double>(n);
  return out;
}

}  // namespace repeval
