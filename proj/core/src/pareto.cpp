#include "gaggam/pareto.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace gaggam {

namespace {

// (value, tie-break value) lexicographic argmin.
int argmin_pair(const std::vector<Individual>& front,
                double (*primary)(const Objectives&),
                double (*secondary)(const Objectives&)) {
  int best = 0;
  for (int i = 1; i < static_cast<int>(front.size()); ++i) {
    const Objectives& cand = front[static_cast<std::size_t>(i)].objectives;
    const Objectives& cur = front[static_cast<std::size_t>(best)].objectives;
    const double dp = primary(cand) - primary(cur);
    if (dp < 0.0 || (dp == 0.0 && secondary(cand) < secondary(cur))) best = i;
  }
  return best;
}

double get_rmse(const Objectives& o) { return o.rmse; }
double get_penalty(const Objectives& o) { return o.penalty; }

}  // namespace

FrontSelection select_representatives(const std::vector<Individual>& front) {
  if (front.empty()) throw std::invalid_argument("empty front");
  for (std::size_t i = 0; i < front.size(); ++i) {
    for (std::size_t j = 0; j < front.size(); ++j) {
      if (i != j && dominates(front[i].objectives, front[j].objectives)) {
        throw std::invalid_argument("front is not pairwise non-dominated");
      }
    }
  }

  double rmse_lo = front[0].objectives.rmse, rmse_hi = rmse_lo;
  double pen_lo = front[0].objectives.penalty, pen_hi = pen_lo;
  for (const Individual& ind : front) {
    rmse_lo = std::min(rmse_lo, ind.objectives.rmse);
    rmse_hi = std::max(rmse_hi, ind.objectives.rmse);
    pen_lo = std::min(pen_lo, ind.objectives.penalty);
    pen_hi = std::max(pen_hi, ind.objectives.penalty);
  }
  const double rmse_span = rmse_hi - rmse_lo;
  const double pen_span = pen_hi - pen_lo;

  // Min-max normalized distance to the ideal corner; a degenerate
  // objective contributes 0 for every member.
  int knee = 0;
  double knee_dist = std::numeric_limits<double>::infinity();
  for (int i = 0; i < static_cast<int>(front.size()); ++i) {
    const Objectives& o = front[static_cast<std::size_t>(i)].objectives;
    const double nr = rmse_span > 0.0 ? (o.rmse - rmse_lo) / rmse_span : 0.0;
    const double np = pen_span > 0.0 ? (o.penalty - pen_lo) / pen_span : 0.0;
    const double dist = std::hypot(nr, np);
    const Objectives& cur = front[static_cast<std::size_t>(knee)].objectives;
    if (dist < knee_dist ||
        (dist == knee_dist &&
         (o.rmse < cur.rmse || (o.rmse == cur.rmse && o.penalty < cur.penalty)))) {
      knee = i;
      knee_dist = dist;
    }
  }

  FrontSelection selection;
  selection.knee = front[static_cast<std::size_t>(knee)];
  selection.best_by_rmse =
      front[static_cast<std::size_t>(argmin_pair(front, get_rmse, get_penalty))];
  selection.best_by_penalty =
      front[static_cast<std::size_t>(argmin_pair(front, get_penalty, get_rmse))];

  const bool ordered =
      selection.best_by_rmse.objectives.rmse <= selection.knee.objectives.rmse &&
      selection.knee.objectives.rmse <= selection.best_by_penalty.objectives.rmse &&
      selection.best_by_penalty.objectives.penalty <=
          selection.knee.objectives.penalty &&
      selection.knee.objectives.penalty <=
          selection.best_by_rmse.objectives.penalty;
  if (!ordered) {
    throw std::logic_error("representative ordering violated on a non-dominated front");
  }
  return selection;
}

}  // namespace gaggam
