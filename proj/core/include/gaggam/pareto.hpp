#ifndef GAGGAM_PARETO_HPP_
#define GAGGAM_PARETO_HPP_

#include <vector>

#include "gaggam/nsga2.hpp"

namespace gaggam {

// The three reported representatives of a final front.
struct FrontSelection {
  Individual knee;
  Individual best_by_rmse;
  Individual best_by_penalty;
};

// best_by_rmse = argmin rmse (tie: lower penalty); best_by_penalty =
// argmin penalty (tie: lower rmse); knee = the member closest to the ideal
// point (0, 0) after min-max normalizing each objective over the front (a
// zero-range objective normalizes to 0 for all members, and the selection
// is invariant under affine rescaling of either objective).
//
// Requires a non-empty, pairwise non-dominated front; throws
// std::invalid_argument otherwise.
FrontSelection select_representatives(const std::vector<Individual>& front);

}  // namespace gaggam

#endif  // GAGGAM_PARETO_HPP_
