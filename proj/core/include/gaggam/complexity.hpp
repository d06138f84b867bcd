#ifndef GAGGAM_COMPLEXITY_HPP_
#define GAGGAM_COMPLEXITY_HPP_

#include <optional>
#include <vector>

#include "gaggam/gam.hpp"

namespace gaggam {

inline constexpr double kUncertaintyWeight = 0.70;
inline constexpr double kSparsityWeight = 0.30;
inline constexpr double kRangeEpsilon = 1e-8;

// Interpretability-oriented complexity of a fitted model, in [0, 1].
struct ComplexityScore {
  double penalty = 0.0;      // kUncertaintyWeight * U + kSparsityWeight * S
  double uncertainty = 0.0;  // U
  double sparsity = 0.0;     // S
  int n_active = 0;
};

int active_term_count(const ModelSpec& spec);

// Mean normalized CI width over active terms.  Each term contributes
// min(width / max(y_range, kRangeEpsilon), 1); an invalid width (nullopt)
// contributes exactly 1.  Empty input yields 0.
double uncertainty_from_widths(const std::vector<std::optional<double>>& widths,
                               double y_range);

// U for a fitted model: term_ci_width per active term, normalized by the
// training-target range captured at fit time.  0 when nothing is active.
double uncertainty_score(const FittedGam& model);

// S = min(n_active, n_features) / n_features.
double sparsity_score(int n_active, int n_features);

double weighted_penalty(double uncertainty, double sparsity);

ComplexityScore complexity_penalty(const FittedGam& model);

}  // namespace gaggam

#endif  // GAGGAM_COMPLEXITY_HPP_
