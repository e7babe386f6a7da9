#pragma once

#include <vector>

namespace repeval {

// Sample correlation coefficient. Throws LengthMismatch, ZeroVariance,
// TooFewPoints.
double pearson(const std::vector<double>& x, const std::vector<double>& y);

enum class TauVariant { TieCorrected, Plain };

// Rank correlation over all pairs; TieCorrected (default) divides by
// sqrt((C+D+Tx)(C+D+Ty)), Plain by n(n-1)/2. Throws LengthMismatch, AllTied
// (tie-corrected denominator vanished), TooFewPoints.
double kendall_tau(const std::vector<double>& x, const std::vector<double>& y,
                   TauVariant variant = TauVariant::TieCorrected);

enum class RankDirection { HigherIsBetter, LowerIsBetter };

// Rank 1 = best; tied values share the average of the ranks they span.
std::vector<double> rank_with_ties(const std::vector<double>& x,
                                   RankDirection direction);

// Geometric mean of two rank vectors, re-ranked (lower product = better).
// Throws LengthMismatch.
std::vector<double> rank_product_joint(const std::vector<double>& r_pred,
                                       const std::vector<double>& r_ref);

}  // namespace repeval
