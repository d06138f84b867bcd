#ifndef GAGGAM_SPLINES_HPP_
#define GAGGAM_SPLINES_HPP_

#include <Eigen/Dense>

namespace gaggam {

// Cubic B-spline basis over the observed range of one feature.
//
// The knot vector has n_basis + degree + 1 entries: the boundary knots are
// replicated degree+1 times at the domain endpoints and the n_basis - 4
// interior knots sit at quantiles of the data the basis was built from
// (uniformly spaced when the quantiles collide).  Evaluation clamps points
// into [domain_lo, domain_hi], so the basis never extrapolates.
struct SplineBasis {
  int degree = 3;
  int n_basis = 0;
  Eigen::VectorXd knots;
  double domain_lo = 0.0;
  double domain_hi = 0.0;
};

// Builds a cubic basis with n_basis functions (n_basis >= 4) from the
// observed values.  Throws FitFailure when all values coincide.
SplineBasis build_basis(const Eigen::VectorXd& values, int n_basis);

// Cox-de Boor evaluation.  Each row sums to 1 and every entry lies in
// [0, 1]; at most degree+1 entries per row are nonzero.
Eigen::MatrixXd evaluate_basis(const SplineBasis& basis,
                               const Eigen::VectorXd& x);

// P = D^T D with D the (n-2) x n second-order difference operator.
// Symmetric PSD; constant and linear coefficient sequences have zero
// quadratic form, which is what lets a large lambda push a spline term
// toward a straight line.
Eigen::MatrixXd second_difference_penalty(int n_basis);

}  // namespace gaggam

#endif  // GAGGAM_SPLINES_HPP_
