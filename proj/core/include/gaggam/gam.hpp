#ifndef GAGGAM_GAM_HPP_
#define GAGGAM_GAM_HPP_

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "gaggam/dataset.hpp"
#include "gaggam/splines.hpp"

namespace gaggam {

enum class TermKind { kNone, kLinear, kSpline };

// Structural choice for one feature's shape function: inactive, a single
// linear column, or a penalized spline block.  n_splines and lambda are
// present exactly when kind == kSpline.
struct TermSpec {
  TermKind kind = TermKind::kNone;
  std::optional<int> n_splines;
  std::optional<double> lambda;
  bool scale = false;

  bool active() const { return kind != TermKind::kNone; }
  bool operator==(const TermSpec&) const = default;
};

// One TermSpec per feature; the additive decomposition of the model.
struct ModelSpec {
  std::vector<TermSpec> terms;

  int n_features() const { return static_cast<int>(terms.size()); }
  bool operator==(const ModelSpec&) const = default;
};

// Column range a term occupies in the design matrix (count 0 = inactive).
struct TermBlock {
  int start = 0;
  int count = 0;
};

// Design matrix plus the state needed to rebuild the same columns for new
// rows: the scaler fitted on the training rows and the per-term bases.
struct Design {
  Eigen::MatrixXd matrix;  // column 0 is the all-ones intercept
  std::vector<TermBlock> blocks;
  ScalerState scaler;
  std::vector<std::optional<SplineBasis>> bases;
};

// Penalized least-squares fit of a ModelSpec:
//
//   beta = (X^T X + L)^-1 X^T y
//
// with L block diagonal: lambda_j * P_j on spline blocks and a ridge of
// kRidgeEpsilon on the intercept and linear columns for conditioning.
// sigma2 = RSS / max(n - edf, 1) with edf = tr(X (X^T X + L)^-1 X^T), and
// covariance = (X^T X + L)^-1 * sigma2.
struct FittedGam {
  ModelSpec spec;
  std::vector<TermBlock> blocks;
  Eigen::VectorXd beta;
  Eigen::MatrixXd covariance;
  double sigma2 = 0.0;
  double edf = 0.0;
  int n_train = 0;
  ScalerState scaler;
  std::vector<std::optional<SplineBasis>> bases;
  double train_target_range = 0.0;  // range of y on the fitting rows
  Eigen::VectorXd feature_min;      // raw per-feature training domain
  Eigen::VectorXd feature_max;
};

inline constexpr double kRidgeEpsilon = 1e-8;
inline constexpr int kCiGridSize = 100;

int validate_term(const TermSpec& term);  // throws std::invalid_argument

// Fit-mode assembly: scalers and bases are created from these rows.
// Throws FitFailure when an active scaled feature has zero variance or a
// spline feature has fewer than two distinct values.
Design assemble_design(const ModelSpec& spec, const Eigen::MatrixXd& features);

// Predict-mode assembly: scalers and bases are reused from a prior fit.
Eigen::MatrixXd assemble_design(const ModelSpec& spec,
                                const Eigen::MatrixXd& features,
                                const ScalerState& scaler,
                                const std::vector<std::optional<SplineBasis>>& bases,
                                const std::vector<TermBlock>& blocks);

FittedGam fit(const ModelSpec& spec, const Eigen::MatrixXd& features,
              const Eigen::VectorXd& target);

Eigen::VectorXd predict(const FittedGam& model, const Eigen::MatrixXd& features);

// One term's shape function over a grid of its feature's training domain,
// with the pointwise 95% band effect +- 1.96 * sqrt(diag(B cov_j B^T)).
struct PartialDependence {
  Eigen::VectorXd grid;
  Eigen::VectorXd effect;
  Eigen::VectorXd ci_lower;
  Eigen::VectorXd ci_upper;
};

PartialDependence partial_dependence(const FittedGam& model, int feature_index,
                                     int grid_size);

// Mean 95% CI width of one active term over a kCiGridSize grid.  Returns
// nullopt (the "invalid" sentinel) when the covariance block is not PSD or
// any width is non-finite; the complexity score maps that to a normalized
// width of 1.
std::optional<double> term_ci_width(const FittedGam& model, int feature_index);

}  // namespace gaggam

#endif  // GAGGAM_GAM_HPP_
