#include "repeval/rank_stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "repeval/types.hpp"

namespace repeval {

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size())
    throw Error(ErrorCode::LengthMismatch, "got " + std::to_string(x.size()) +
                                               " and " + std::to_string(y.size()) +
                                               " values");
  const std::size_t n = x.size();
  if (n < 2) throw Error(ErrorCode::TooFewPoints, "need at least 2 values");

  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx == 0.0 || syy == 0.0)
    throw Error(ErrorCode::ZeroVariance, "an input has zero variance");
  return sxy / (std::sqrt(sxx) * std::sqrt(syy));
}

double kendall_tau(const std::vector<double>& x, const std::vector<double>& y,
                   TauVariant variant) {
  if (x.size() != y.size())
    throw Error(ErrorCode::LengthMismatch, "got " + std::to_string(x.size()) +
                                               " and " + std::to_string(y.size()) +
                                               " values");
  const std::size_t n = x.size();
  if (n < 2) throw Error(ErrorCode::TooFewPoints, "need at least 2 values");

  long long concordant = 0, discordant = 0, ties_x = 0, ties_y = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dx = x[i] - x[j];
      const double dy = y[i] - y[j];
      if (dx == 0.0 && dy == 0.0) continue;
      if (dx == 0.0)
        ++ties_x;
      else if (dy == 0.0)
        ++ties_y;
      else if ((dx < 0.0) == (dy < 0.0))
        ++concordant;
      else
        ++discordant;
    }
  }
  const double diff = static_cast<double>(concordant - discordant);
  if (variant == TauVariant::Plain) {
    const double all = static_cast<double>(n) * static_cast<double>(n - 1) / 2.0;
    return diff / all;
  }
  const double dx = static_cast<double>(concordant + discordant + ties_x);
  const double dy = static_cast<double>(concordant + discordant + ties_y);
  if (dx == 0.0 || dy == 0.0)
    throw Error(ErrorCode::AllTied, "an input's values are all identical");
  return diff / (std::sqrt(dx) * std::sqrt(dy));
}

std::vector<double> rank_with_ties(const std::vector<double>& x,
                                   RankDirection direction) {
  const std::size_t n = x.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return direction == RankDirection::HigherIsBetter ? x[a] > x[b] : x[a] < x[b];
  });

  std::vector<double> ranks(n, 0.0);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && x[order[j + 1]] == x[order[i]]) ++j;
    const double avg = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (std::size_t p = i; p <= j; ++p) ranks[order[p]] = avg;
    i = j + 1;
  }
  return ranks;
}

std::vector<double> rank_product_joint(const std::vector<double>& r_pred,
                                       const std::vector<double>& r_ref) {
  if (r_pred.size() != r_ref.size())
    throw Error(ErrorCode::LengthMismatch, "got " + std::to_string(r_pred.size()) +
                                               " and " + std::to_string(r_ref.size()) +
                                               " ranks");
  std::vector<double> geo(r_pred.size());
  for (std::size_t i = 0; i < geo.size(); ++i)
    geo[i] = std::sqrt(r_pred[i] * r_ref[i]);
  return rank_with_ties(geo, RankDirection::LowerIsBetter);
}

}  // namespace repeval
