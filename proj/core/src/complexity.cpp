#include "gaggam/complexity.hpp"

#include <algorithm>
#include <stdexcept>

namespace gaggam {

int active_term_count(const ModelSpec& spec) {
  int n = 0;
  for (const TermSpec& term : spec.terms) {
    if (term.active()) ++n;
  }
  return n;
}

double uncertainty_from_widths(const std::vector<std::optional<double>>& widths,
                               double y_range) {
  if (widths.empty()) return 0.0;
  const double denom = std::max(y_range, kRangeEpsilon);
  double sum = 0.0;
  for (const auto& w : widths) {
    // Invalid intervals count as the worst case; valid ones are clipped at
    // 1 so the mean (and hence the penalty) stays inside [0, 1].
    sum += w ? std::min(*w / denom, 1.0) : 1.0;
  }
  return sum / static_cast<double>(widths.size());
}

double uncertainty_score(const FittedGam& model) {
  std::vector<std::optional<double>> widths;
  for (int f = 0; f < model.spec.n_features(); ++f) {
    if (model.spec.terms[static_cast<std::size_t>(f)].active()) {
      widths.push_back(term_ci_width(model, f));
    }
  }
  return uncertainty_from_widths(widths, model.train_target_range);
}

double sparsity_score(int n_active, int n_features) {
  if (n_features < 1) throw std::invalid_argument("n_features must be >= 1");
  return static_cast<double>(std::min(n_active, n_features)) / n_features;
}

double weighted_penalty(double uncertainty, double sparsity) {
  return kUncertaintyWeight * uncertainty + kSparsityWeight * sparsity;
}

ComplexityScore complexity_penalty(const FittedGam& model) {
  ComplexityScore score;
  score.n_active = active_term_count(model.spec);
  score.uncertainty = uncertainty_score(model);
  score.sparsity = sparsity_score(score.n_active, model.spec.n_features());
  score.penalty = weighted_penalty(score.uncertainty, score.sparsity);
  return score;
}

}  // namespace gaggam
