#ifndef GAGGAM_BASELINES_HPP_
#define GAGGAM_BASELINES_HPP_

#include <Eigen/Dense>
#include <memory>

#include "gaggam/gam.hpp"

namespace gaggam {

inline constexpr int kBaselineSplines = 25;
inline constexpr double kBaselineLambda = 0.6;

// Dense reference model: every feature a spline with 25 basis functions,
// lambda 0.6, no scaling.  Deliberately outside the gene ranges.
ModelSpec baseline_gam_spec(int n_features);

// Regression tree node: a leaf carries the mean target of its rows, an
// internal node routes value <= threshold to the left child.
struct CartNode {
  double value = 0.0;
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  std::unique_ptr<CartNode> left;
  std::unique_ptr<CartNode> right;

  bool is_leaf() const { return feature < 0; }
};

struct CartParams {
  int min_samples_split = 2;
  int min_samples_leaf = 1;
  int max_depth = -1;  // -1 = unbounded, the reference configuration
};

struct SplitCandidate {
  bool found = false;
  int feature = -1;
  double threshold = 0.0;
  double gain = 0.0;  // reduction in summed squared error
};

// Best variance-reduction split over all features for the given rows.
// Thresholds are midpoints of consecutive distinct sorted values; ties
// break toward the lowest feature index, then the lowest threshold.
SplitCandidate best_split(const Eigen::MatrixXd& features,
                          const Eigen::VectorXd& target,
                          const std::vector<int>& rows, int min_samples_leaf);

// Greedy CART growth until nodes are pure, too small, or no split helps.
// Deterministic under training-row permutation.
std::unique_ptr<CartNode> fit_cart(const Eigen::MatrixXd& features,
                                   const Eigen::VectorXd& target,
                                   const CartParams& params = {});

Eigen::VectorXd predict_cart(const CartNode& tree, const Eigen::MatrixXd& features);

int count_leaves(const CartNode& tree);

}  // namespace gaggam

#endif  // GAGGAM_BASELINES_HPP_
