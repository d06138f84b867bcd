#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "gaggam/baselines.hpp"
#include "gaggam/evaluation.hpp"
#include "support/test_support.hpp"

using namespace gaggam;

namespace {

bool trees_equal(const CartNode& a, const CartNode& b) {
  if (a.is_leaf() != b.is_leaf()) return false;
  if (a.is_leaf()) return a.value == b.value;
  return a.feature == b.feature && a.threshold == b.threshold &&
         trees_equal(*a.left, *b.left) && trees_equal(*a.right, *b.right);
}

double training_mse(const CartNode& tree, const Eigen::MatrixXd& x,
                    const Eigen::VectorXd& y) {
  return (predict_cart(tree, x) - y).squaredNorm() / static_cast<double>(y.size());
}

}  // namespace

TEST_CASE("baseline spec: 25-spline terms on every feature") {
  const ModelSpec spec = baseline_gam_spec(8);
  REQUIRE(spec.n_features() == 8);
  for (const TermSpec& term : spec.terms) {
    CHECK(term.kind == TermKind::kSpline);
    CHECK(*term.n_splines == 25);
    CHECK(*term.lambda == doctest::Approx(0.6));
    CHECK_FALSE(term.scale);
  }
  // Outside the GA gene clamp by design, yet a perfectly valid TermSpec.
  CHECK(*spec.terms[0].n_splines > 20);
  CHECK_NOTHROW(validate_term(spec.terms[0]));

  // 8 x 25 basis columns plus the intercept.
  const Dataset data = testsupport::make_sine_linear_dataset(300, 6, 0.2, 5);
  const Design design = assemble_design(spec, data.features);
  CHECK(design.matrix.cols() == 201);
}

TEST_CASE("baseline spec refits deterministically") {
  const Dataset data = testsupport::make_sine_linear_dataset(260, 6, 0.2, 6);
  const ModelSpec spec = baseline_gam_spec(8);
  const FittedGam a = fit(spec, data.features, data.target);
  const FittedGam b = fit(spec, data.features, data.target);
  CHECK(a.beta == b.beta);
}

TEST_CASE("constant target yields a single leaf") {
  Eigen::MatrixXd x(10, 2);
  x.setRandom();
  const Eigen::VectorXd y = Eigen::VectorXd::Constant(10, 3.5);
  const auto tree = fit_cart(x, y);
  CHECK(tree->is_leaf());
  CHECK(tree->value == 3.5);
  CHECK(count_leaves(*tree) == 1);
}

TEST_CASE("step function: one split at the step midpoint, two pure leaves") {
  Eigen::MatrixXd x(10, 1);
  Eigen::VectorXd y(10);
  for (int i = 0; i < 10; ++i) {
    x(i, 0) = static_cast<double>(i);
    y(i) = i < 6 ? 1.0 : 5.0;
  }
  const auto tree = fit_cart(x, y);
  REQUIRE_FALSE(tree->is_leaf());
  CHECK(tree->feature == 0);
  CHECK(tree->threshold == doctest::Approx(5.5));
  CHECK(tree->left->is_leaf());
  CHECK(tree->right->is_leaf());
  CHECK(tree->left->value == 1.0);
  CHECK(tree->right->value == 5.0);

  // Exhaustive oracle: try every midpoint and verify 5.5 minimizes SSE.
  const SplitCandidate found = best_split(x, y, {0, 1, 2, 3, 4, 5, 6, 7, 8, 9}, 1);
  double best_sse = std::numeric_limits<double>::infinity();
  double best_threshold = 0;
  for (int i = 0; i + 1 < 10; ++i) {
    const double threshold = 0.5 * (x(i, 0) + x(i + 1, 0));
    double suml = 0, sumr = 0;
    int nl = 0, nr = 0;
    for (int r = 0; r < 10; ++r) (x(r, 0) <= threshold ? (suml += y(r), ++nl) : (sumr += y(r), ++nr));
    double sse = 0;
    for (int r = 0; r < 10; ++r) {
      const double mean = x(r, 0) <= threshold ? suml / nl : sumr / nr;
      sse += (y(r) - mean) * (y(r) - mean);
    }
    if (sse < best_sse) {
      best_sse = sse;
      best_threshold = threshold;
    }
  }
  CHECK(found.threshold == doctest::Approx(best_threshold));
}

TEST_CASE("unbounded depth memorizes distinct targets") {
  Rng rng(22);
  Eigen::MatrixXd x(60, 3);
  Eigen::VectorXd y(60);
  for (int i = 0; i < 60; ++i) {
    for (int c = 0; c < 3; ++c) x(i, c) = rng.uniform();
    y(i) = rng.uniform();  // almost surely all distinct
  }
  const auto tree = fit_cart(x, y);
  CHECK(std::sqrt(training_mse(*tree, x, y)) < 1e-12);
  CHECK(count_leaves(*tree) == 60);
}

TEST_CASE("threshold boundary value routes left") {
  CartNode root;
  root.feature = 0;
  root.threshold = 2.0;
  root.left = std::make_unique<CartNode>();
  root.right = std::make_unique<CartNode>();
  root.left->value = -1.0;
  root.right->value = 1.0;
  Eigen::MatrixXd probe(3, 1);
  probe << 1.9, 2.0, 2.1;
  const Eigen::VectorXd out = predict_cart(root, probe);
  CHECK(out(0) == -1.0);
  CHECK(out(1) == -1.0);  // boundary goes left
  CHECK(out(2) == 1.0);
}

TEST_CASE("single leaf predicts a constant vector") {
  CartNode leaf;
  leaf.value = 7.25;
  Eigen::MatrixXd probe(5, 2);
  probe.setRandom();
  const Eigen::VectorXd out = predict_cart(leaf, probe);
  CHECK((out.array() == 7.25).all());
}

TEST_CASE("training MSE is non-increasing with depth") {
  const Dataset data = testsupport::make_sine_linear_dataset(200, 1, 0.2, 33);
  double previous = std::numeric_limits<double>::infinity();
  for (const int depth : {0, 1, 2, 4, 8, -1}) {
    CartParams params;
    params.max_depth = depth;
    const auto tree = fit_cart(data.features, data.target, params);
    const double mse = training_mse(*tree, data.features, data.target);
    CHECK(mse <= previous + 1e-12);
    previous = mse;
  }
}

TEST_CASE("row permutation leaves the tree bit-identical") {
  const Dataset data = testsupport::make_sine_linear_dataset(150, 2, 0.25, 44);
  const auto base = fit_cart(data.features, data.target);

  std::vector<int> perm(static_cast<std::size_t>(data.n_rows()));
  std::iota(perm.begin(), perm.end(), 0);
  Rng rng(9);
  rng.shuffle(perm);
  const Dataset shuffled = select_rows(data, perm);
  const auto permuted = fit_cart(shuffled.features, shuffled.target);

  CHECK(trees_equal(*base, *permuted));
}

TEST_CASE("min_samples_leaf is honored") {
  const Dataset data = testsupport::make_sine_linear_dataset(120, 0, 0.2, 50);
  CartParams params;
  params.min_samples_leaf = 10;
  const auto tree = fit_cart(data.features, data.target, params);

  // Count rows reaching each leaf; every leaf must hold >= 10.
  const Eigen::VectorXd pred = predict_cart(*tree, data.features);
  std::map<double, int> leaf_counts;
  for (int i = 0; i < data.n_rows(); ++i) leaf_counts[pred(i)] += 1;
  for (const auto& [value, count] : leaf_counts) CHECK(count >= 10);
}
