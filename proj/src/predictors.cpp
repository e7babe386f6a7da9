#include "repeval/predictors.hpp"

#include <Eigen/QR>
#include <cmath>
#include <string>

namespace repeval {

namespace {

struct Moments {
  double mean = 0.0;
  double sd = 0.0;
};

Moments moments_of(const std::vector<double>& xs) {
  Moments m;
  for (const double x : xs) m.mean += x;
  m.mean /= static_cast<double>(xs.size());
  double ss = 0.0;
  for (const double x : xs) ss += (x - m.mean) * (x - m.mean);
  m.sd = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  return m;
}

}  // namespace

ClidScores clid_score(const std::vector<ModelMetrics>& population,
                      ClidNormalization normalization) {
  const std::size_t n = population.size();
  if (n == 0) throw Error(ErrorCode::TooFewPoints, "empty population");

  ClidScores out;
  out.values.resize(n);
  if (normalization == ClidNormalization::Raw) {
    for (std::size_t i = 0; i < n; ++i)
      out.values[i] = population[i].cl + population[i].id;
    return out;
  }

  if (n < 2)
    throw Error(ErrorCode::TooFewPoints, "z-scores need at least two models");
  std::vector<double> cl(n), id(n);
  for (std::size_t i = 0; i < n; ++i) {
    cl[i] = population[i].cl;
    id[i] = population[i].id;
  }
  const Moments mc = moments_of(cl);
  const Moments mi = moments_of(id);
  out.degenerate_cl = mc.sd == 0.0;
  out.degenerate_id = mi.sd == 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double v = 0.0;
    if (!out.degenerate_cl) v += (cl[i] - mc.mean) / mc.sd;
    if (!out.degenerate_id) v += (id[i] - mi.mean) / mi.sd;
    out.values[i] = v;
  }
  return out;
}

PredictorWeights fit_wclid(const std::vector<ModelMetrics>& population) {
  std::vector<const ModelMetrics*> rows;
  for (const auto& m : population)
    if (m.accuracy) rows.push_back(&m);
  const std::size_t n = rows.size();
  if (n < 3)
    throw Error(ErrorCode::TooFewPoints,
                "need at least 3 models with accuracy, got " + std::to_string(n));

  Eigen::MatrixXd a(n, 3);
  Eigen::VectorXd b(n);
  for (std::size_t i = 0; i < n; ++i) {
    a(static_cast<Eigen::Index>(i), 0) = rows[i]->cl;
    a(static_cast<Eigen::Index>(i), 1) = rows[i]->id;
    a(static_cast<Eigen::Index>(i), 2) = 1.0;
    b(static_cast<Eigen::Index>(i)) = *rows[i]->accuracy;
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
  if (qr.rank() < 3)
    throw Error(ErrorCode::RankDeficient,
                "learnability and dimension are affinely dependent");
  const Eigen::VectorXd w = qr.solve(b);

  PredictorWeights out;
  out.w[0] = w(0);
  out.w[1] = w(1);
  out.w[2] = w(2);
  out.rss = (a * w - b).squaredNorm();
  out.n_models = n;
  return out;
}

double wclid_score(const PredictorWeights& weights, const ModelMetrics& m) {
  return weights.w[0] * m.cl + weights.w[1] * m.id + weights.w[2];
}

}  // namespace repeval
