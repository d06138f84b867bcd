#include "gaggam/splines.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "gaggam/errors.hpp"

namespace gaggam {

namespace {

// Linear-interpolation quantile (the numpy/R type-7 convention) on a
// sorted vector.
double sorted_quantile(const std::vector<double>& sorted, double q) {
  const std::size_t n = sorted.size();
  const double h = q * static_cast<double>(n - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, n - 1);
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

}  // namespace

SplineBasis build_basis(const Eigen::VectorXd& values, int n_basis) {
  constexpr int degree = 3;
  if (n_basis < 4) throw std::invalid_argument("n_basis must be >= 4");
  if (values.size() < 2) throw FitFailure("spline term needs at least 2 values");

  std::vector<double> sorted(values.data(), values.data() + values.size());
  std::sort(sorted.begin(), sorted.end());
  const double lo = sorted.front();
  const double hi = sorted.back();
  if (!(hi > lo)) throw FitFailure("spline term on all-equal feature values");

  const int n_interior = n_basis - degree - 1;
  std::vector<double> interior(static_cast<std::size_t>(n_interior));
  for (int i = 0; i < n_interior; ++i) {
    interior[static_cast<std::size_t>(i)] =
        sorted_quantile(sorted, static_cast<double>(i + 1) / (n_interior + 1));
  }

  // Quantile knots must be strictly increasing and strictly inside the
  // domain; heavily tied data breaks that, in which case we fall back to
  // uniformly spaced interior knots.
  bool quantiles_ok = true;
  double prev = lo;
  for (const double k : interior) {
    if (!(k > prev) || !(k < hi)) {
      quantiles_ok = false;
      break;
    }
    prev = k;
  }
  if (!quantiles_ok) {
    for (int i = 0; i < n_interior; ++i) {
      interior[static_cast<std::size_t>(i)] =
          lo + (hi - lo) * static_cast<double>(i + 1) / (n_interior + 1);
    }
  }

  SplineBasis basis;
  basis.degree = degree;
  basis.n_basis = n_basis;
  basis.domain_lo = lo;
  basis.domain_hi = hi;
  basis.knots.resize(n_basis + degree + 1);
  for (int i = 0; i <= degree; ++i) basis.knots(i) = lo;
  for (int i = 0; i < n_interior; ++i) {
    basis.knots(degree + 1 + i) = interior[static_cast<std::size_t>(i)];
  }
  for (int i = 0; i <= degree; ++i) basis.knots(n_basis + i) = hi;
  return basis;
}

Eigen::MatrixXd evaluate_basis(const SplineBasis& basis, const Eigen::VectorXd& x) {
  const int d = basis.degree;
  const int n = basis.n_basis;
  const Eigen::VectorXd& t = basis.knots;

  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(x.size(), n);
  std::vector<double> left(static_cast<std::size_t>(d) + 1);
  std::vector<double> right(static_cast<std::size_t>(d) + 1);
  std::vector<double> vals(static_cast<std::size_t>(d) + 1);

  for (Eigen::Index row = 0; row < x.size(); ++row) {
    const double xv = std::clamp(x(row), basis.domain_lo, basis.domain_hi);

    // Knot span index j with t(j) <= xv < t(j+1), clamped into [d, n-1] so
    // the right boundary lands in the last genuine span.
    int span = d;
    while (span < n - 1 && xv >= t(span + 1)) ++span;

    // Cox-de Boor triangular scheme: vals[k] ends as B_{span-d+k, d}(xv).
    vals[0] = 1.0;
    for (int r = 1; r <= d; ++r) {
      left[static_cast<std::size_t>(r)] = xv - t(span + 1 - r);
      right[static_cast<std::size_t>(r)] = t(span + r) - xv;
      double saved = 0.0;
      for (int k = 0; k < r; ++k) {
        const double denom = right[static_cast<std::size_t>(k) + 1] +
                             left[static_cast<std::size_t>(r - k)];
        const double tmp = vals[static_cast<std::size_t>(k)] / denom;
        vals[static_cast<std::size_t>(k)] =
            saved + right[static_cast<std::size_t>(k) + 1] * tmp;
        saved = left[static_cast<std::size_t>(r - k)] * tmp;
      }
      vals[static_cast<std::size_t>(r)] = saved;
    }

    for (int k = 0; k <= d; ++k) {
      out(row, span - d + k) = vals[static_cast<std::size_t>(k)];
    }
  }
  return out;
}

Eigen::MatrixXd second_difference_penalty(int n_basis) {
  if (n_basis < 3) throw std::invalid_argument("penalty needs n_basis >= 3");
  Eigen::MatrixXd diff = Eigen::MatrixXd::Zero(n_basis - 2, n_basis);
  for (int i = 0; i < n_basis - 2; ++i) {
    diff(i, i) = 1.0;
    diff(i, i + 1) = -2.0;
    diff(i, i + 2) = 1.0;
  }
  return diff.transpose() * diff;
}

}  // namespace gaggam
