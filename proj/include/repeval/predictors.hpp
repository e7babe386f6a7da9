#pragma once

#include "repeval/types.hpp"

#include <map>
#include <optional>
#include <string>

namespace repeval {

struct ModelMetrics {
  std::string name;
  double cl = 0.0;
  double id = 0.0;
  std::optional<double> accuracy;
  std::map<std::string, double> extra;
};

struct PredictorWeights {
  double w[3] = {0, 0, 0};  // coefficients for [cl; id; 1]
  double rss = 0.0;
  std::size_t n_models = 0;
};

enum class ClidNormalization { ZScore, Raw };

struct ClidScores {
  std::vector<double> values;
  bool degenerate_cl = false;  // constant metric contributed zero
  bool degenerate_id = false;
};

// Standardized-sum score per model: ZScore (default) standardizes cl and id
// across the population and sums; Raw sums the literal values. A metric with
// zero spread contributes zero, flagged. Scores compare only within one call.
ClidScores clid_score(const std::vector<ModelMetrics>& population,
                      ClidNormalization normalization = ClidNormalization::ZScore);

// Least squares of accuracy on [cl, id, 1] via a rank-revealing orthogonal
// decomposition. Needs >= 3 models with accuracy. Throws RankDeficient,
// TooFewPoints.
PredictorWeights fit_wclid(const std::vector<ModelMetrics>& population);

double wclid_score(const PredictorWeights& weights, const ModelMetrics& m);

}  // namespace repeval
