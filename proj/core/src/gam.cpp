#include "gaggam/gam.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <stdexcept>

#include "gaggam/errors.hpp"

namespace gaggam {

namespace {

int term_column_count(const TermSpec& term) {
  switch (term.kind) {
    case TermKind::kNone:
      return 0;
    case TermKind::kLinear:
      return 1;
    case TermKind::kSpline:
      return *term.n_splines;
  }
  return 0;
}

}  // namespace

int validate_term(const TermSpec& term) {
  if (term.kind == TermKind::kSpline) {
    if (!term.n_splines || !term.lambda) {
      throw std::invalid_argument("spline term needs n_splines and lambda");
    }
    if (*term.n_splines < 4) throw std::invalid_argument("n_splines must be >= 4");
    if (!(*term.lambda > 0.0)) throw std::invalid_argument("lambda must be > 0");
  } else if (term.n_splines || term.lambda) {
    throw std::invalid_argument("n_splines/lambda only valid on spline terms");
  }
  return term_column_count(term);
}

Design assemble_design(const ModelSpec& spec, const Eigen::MatrixXd& features) {
  const int n_features = static_cast<int>(features.cols());
  if (spec.n_features() != n_features) {
    throw std::invalid_argument("spec length does not match feature count");
  }

  int n_cols = 1;
  std::vector<int> scale_columns;
  for (int f = 0; f < n_features; ++f) {
    const TermSpec& term = spec.terms[static_cast<std::size_t>(f)];
    n_cols += validate_term(term);
    if (term.active() && term.scale) scale_columns.push_back(f);
  }

  Design design;
  try {
    design.scaler = fit_scaler(features, scale_columns);
  } catch (const DataError& e) {
    throw FitFailure(e.what());
  }
  const Eigen::MatrixXd scaled = apply_scaler(design.scaler, features);

  design.matrix.resize(features.rows(), n_cols);
  design.matrix.col(0).setOnes();
  design.blocks.resize(static_cast<std::size_t>(n_features));
  design.bases.resize(static_cast<std::size_t>(n_features));

  int col = 1;
  for (int f = 0; f < n_features; ++f) {
    const TermSpec& term = spec.terms[static_cast<std::size_t>(f)];
    TermBlock& block = design.blocks[static_cast<std::size_t>(f)];
    block.start = col;
    block.count = term_column_count(term);
    if (term.kind == TermKind::kLinear) {
      design.matrix.col(col) = scaled.col(f);
    } else if (term.kind == TermKind::kSpline) {
      const SplineBasis basis = build_basis(scaled.col(f), *term.n_splines);
      design.matrix.middleCols(col, block.count) =
          evaluate_basis(basis, scaled.col(f));
      design.bases[static_cast<std::size_t>(f)] = basis;
    }
    col += block.count;
  }
  return design;
}

Eigen::MatrixXd assemble_design(const ModelSpec& spec,
                                const Eigen::MatrixXd& features,
                                const ScalerState& scaler,
                                const std::vector<std::optional<SplineBasis>>& bases,
                                const std::vector<TermBlock>& blocks) {
  const int n_features = static_cast<int>(features.cols());
  if (spec.n_features() != n_features) {
    throw std::invalid_argument("spec length does not match feature count");
  }
  const Eigen::MatrixXd scaled = apply_scaler(scaler, features);

  int n_cols = 1;
  for (const TermBlock& b : blocks) n_cols += b.count;

  Eigen::MatrixXd matrix(features.rows(), n_cols);
  matrix.col(0).setOnes();
  for (int f = 0; f < n_features; ++f) {
    const TermSpec& term = spec.terms[static_cast<std::size_t>(f)];
    const TermBlock& block = blocks[static_cast<std::size_t>(f)];
    if (term.kind == TermKind::kLinear) {
      matrix.col(block.start) = scaled.col(f);
    } else if (term.kind == TermKind::kSpline) {
      matrix.middleCols(block.start, block.count) =
          evaluate_basis(*bases[static_cast<std::size_t>(f)], scaled.col(f));
    }
  }
  return matrix;
}

FittedGam fit(const ModelSpec& spec, const Eigen::MatrixXd& features,
              const Eigen::VectorXd& target) {
  const int n = static_cast<int>(features.rows());
  if (n < 2) throw std::invalid_argument("fit needs at least 2 rows");
  if (target.size() != n) throw std::invalid_argument("feature/target length mismatch");

  Design design = assemble_design(spec, features);
  const Eigen::MatrixXd& X = design.matrix;
  const int p = static_cast<int>(X.cols());

  const Eigen::MatrixXd xtx = X.transpose() * X;
  const Eigen::VectorXd xty = X.transpose() * target;

  // Block-diagonal penalty: smoothing on spline blocks, a small ridge on
  // the intercept and linear columns so the system stays well posed.
  Eigen::MatrixXd penalized = xtx;
  penalized(0, 0) += kRidgeEpsilon;
  for (int f = 0; f < spec.n_features(); ++f) {
    const TermSpec& term = spec.terms[static_cast<std::size_t>(f)];
    const TermBlock& block = design.blocks[static_cast<std::size_t>(f)];
    if (term.kind == TermKind::kLinear) {
      penalized(block.start, block.start) += kRidgeEpsilon;
    } else if (term.kind == TermKind::kSpline) {
      penalized.block(block.start, block.start, block.count, block.count) +=
          *term.lambda * second_difference_penalty(block.count);
    }
  }

  const Eigen::LDLT<Eigen::MatrixXd> ldlt(penalized);
  if (ldlt.info() != Eigen::Success) {
    throw FitFailure("penalized normal equations factorization failed");
  }

  FittedGam model;
  model.beta = ldlt.solve(xty);
  if (!model.beta.allFinite()) {
    throw FitFailure("non-finite coefficients from singular system");
  }

  model.edf = ldlt.solve(xtx).trace();
  const double rss = (target - X * model.beta).squaredNorm();
  model.sigma2 = rss / std::max(static_cast<double>(n) - model.edf, 1.0);

  Eigen::MatrixXd cov =
      ldlt.solve(Eigen::MatrixXd::Identity(p, p)) * model.sigma2;
  model.covariance = 0.5 * (cov + cov.transpose());
  if (!model.covariance.allFinite()) {
    throw FitFailure("non-finite covariance from singular system");
  }

  model.spec = spec;
  model.blocks = std::move(design.blocks);
  model.scaler = std::move(design.scaler);
  model.bases = std::move(design.bases);
  model.n_train = n;
  model.train_target_range = target.maxCoeff() - target.minCoeff();
  model.feature_min = features.colwise().minCoeff();
  model.feature_max = features.colwise().maxCoeff();
  return model;
}

Eigen::VectorXd predict(const FittedGam& model, const Eigen::MatrixXd& features) {
  const Eigen::MatrixXd X = assemble_design(model.spec, features, model.scaler,
                                            model.bases, model.blocks);
  return X * model.beta;
}

PartialDependence partial_dependence(const FittedGam& model, int feature_index,
                                     int grid_size) {
  if (feature_index < 0 || feature_index >= model.spec.n_features()) {
    throw std::invalid_argument("feature index out of range");
  }
  const TermSpec& term = model.spec.terms[static_cast<std::size_t>(feature_index)];
  if (!term.active()) {
    throw std::invalid_argument("partial dependence of an inactive term");
  }
  if (grid_size < 2) throw std::invalid_argument("grid_size must be >= 2");

  const double lo = model.feature_min(feature_index);
  const double hi = model.feature_max(feature_index);

  PartialDependence pd;
  pd.grid.resize(grid_size);
  for (int i = 0; i < grid_size; ++i) {
    pd.grid(i) = lo + (hi - lo) * static_cast<double>(i) / (grid_size - 1);
  }

  Eigen::VectorXd col = pd.grid;
  const std::size_t f = static_cast<std::size_t>(feature_index);
  if (model.scaler.scaled[f]) {
    col = (col.array() - model.scaler.mean[f]) / model.scaler.stddev[f];
  }

  const TermBlock& block = model.blocks[f];
  Eigen::MatrixXd basis_rows;
  if (term.kind == TermKind::kLinear) {
    basis_rows = col;
  } else {
    basis_rows = evaluate_basis(*model.bases[f], col);
  }

  const Eigen::VectorXd beta_block = model.beta.segment(block.start, block.count);
  const Eigen::MatrixXd cov_block =
      model.covariance.block(block.start, block.start, block.count, block.count);

  pd.effect = basis_rows * beta_block;
  pd.ci_lower.resize(grid_size);
  pd.ci_upper.resize(grid_size);
  for (int i = 0; i < grid_size; ++i) {
    const Eigen::VectorXd row = basis_rows.row(i);
    const double var = row.dot(cov_block * row);
    const double half = 1.96 * std::sqrt(var);  // NaN when the block is not PSD
    pd.ci_lower(i) = pd.effect(i) - half;
    pd.ci_upper(i) = pd.effect(i) + half;
  }
  return pd;
}

std::optional<double> term_ci_width(const FittedGam& model, int feature_index) {
  const PartialDependence pd =
      partial_dependence(model, feature_index, kCiGridSize);
  double sum = 0.0;
  for (Eigen::Index i = 0; i < pd.grid.size(); ++i) {
    const double width = pd.ci_upper(i) - pd.ci_lower(i);
    if (!std::isfinite(width)) return std::nullopt;
    sum += width;
  }
  return sum / static_cast<double>(pd.grid.size());
}

}  // namespace gaggam
