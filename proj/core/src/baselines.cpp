#include "gaggam/baselines.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace gaggam {

ModelSpec baseline_gam_spec(int n_features) {
  if (n_features < 1) throw std::invalid_argument("n_features must be >= 1");
  ModelSpec spec;
  spec.terms.resize(static_cast<std::size_t>(n_features));
  for (TermSpec& term : spec.terms) {
    term.kind = TermKind::kSpline;
    term.n_splines = kBaselineSplines;
    term.lambda = kBaselineLambda;
    term.scale = false;
  }
  return spec;
}

namespace {

// Order-independent mean: targets are summed in sorted order so that row
// permutations of the training data cannot change the result bitwise.
double sorted_mean(const Eigen::VectorXd& target, const std::vector<int>& rows) {
  std::vector<double> values;
  values.reserve(rows.size());
  for (const int r : rows) values.push_back(target(r));
  std::sort(values.begin(), values.end());
  const double sum = std::accumulate(values.begin(), values.end(), 0.0);
  return sum / static_cast<double>(values.size());
}

bool is_pure(const Eigen::VectorXd& target, const std::vector<int>& rows) {
  const double first = target(rows.front());
  for (const int r : rows) {
    if (target(r) != first) return false;
  }
  return true;
}

double node_sse(const std::vector<std::pair<double, double>>& sorted_by_value) {
  double sum = 0.0, sumsq = 0.0;
  for (const auto& [value, y] : sorted_by_value) {
    sum += y;
    sumsq += y * y;
  }
  const double n = static_cast<double>(sorted_by_value.size());
  return sumsq - sum * sum / n;
}

}  // namespace

SplitCandidate best_split(const Eigen::MatrixXd& features,
                          const Eigen::VectorXd& target,
                          const std::vector<int>& rows, int min_samples_leaf) {
  const int n = static_cast<int>(rows.size());
  SplitCandidate best;

  std::vector<std::pair<double, double>> cells(static_cast<std::size_t>(n));
  for (int f = 0; f < static_cast<int>(features.cols()); ++f) {
    for (int i = 0; i < n; ++i) {
      const int r = rows[static_cast<std::size_t>(i)];
      cells[static_cast<std::size_t>(i)] = {features(r, f), target(r)};
    }
    // Sorting by (value, target) makes every prefix sum independent of the
    // caller's row order.
    std::sort(cells.begin(), cells.end());

    const double parent_sse = node_sse(cells);
    const double min_gain = 1e-12 * std::max(1.0, parent_sse);

    double left_sum = 0.0, left_sumsq = 0.0;
    double total_sum = 0.0, total_sumsq = 0.0;
    for (const auto& [value, y] : cells) {
      total_sum += y;
      total_sumsq += y * y;
    }

    for (int i = 0; i + 1 < n; ++i) {
      const auto& [value, y] = cells[static_cast<std::size_t>(i)];
      left_sum += y;
      left_sumsq += y * y;
      const double next_value = cells[static_cast<std::size_t>(i) + 1].first;
      if (!(next_value > value)) continue;  // candidates between distinct values only

      const int n_left = i + 1;
      const int n_right = n - n_left;
      if (n_left < min_samples_leaf || n_right < min_samples_leaf) continue;

      const double right_sum = total_sum - left_sum;
      const double right_sumsq = total_sumsq - left_sumsq;
      const double sse = (left_sumsq - left_sum * left_sum / n_left) +
                         (right_sumsq - right_sum * right_sum / n_right);
      const double gain = parent_sse - sse;
      // Strict improvement; scanning features and thresholds in ascending
      // order makes first-found the (lowest feature, lowest threshold) tie
      // winner.
      if (gain > min_gain && (!best.found || gain > best.gain)) {
        best.found = true;
        best.feature = f;
        best.threshold = 0.5 * (value + next_value);
        best.gain = gain;
      }
    }
  }
  return best;
}

std::unique_ptr<CartNode> fit_cart(const Eigen::MatrixXd& features,
                                   const Eigen::VectorXd& target,
                                   const CartParams& params) {
  const int n = static_cast<int>(features.rows());
  if (n < 1 || target.size() != n) {
    throw std::invalid_argument("fit_cart needs matching non-empty inputs");
  }

  auto root = std::make_unique<CartNode>();
  struct WorkItem {
    CartNode* node;
    std::vector<int> rows;
    int depth;
  };
  std::vector<int> all(static_cast<std::size_t>(n));
  std::iota(all.begin(), all.end(), 0);
  std::vector<WorkItem> stack;
  stack.push_back({root.get(), std::move(all), 0});

  while (!stack.empty()) {
    WorkItem item = std::move(stack.back());
    stack.pop_back();
    CartNode* node = item.node;
    node->value = sorted_mean(target, item.rows);

    const bool depth_ok = params.max_depth < 0 || item.depth < params.max_depth;
    if (static_cast<int>(item.rows.size()) < params.min_samples_split || !depth_ok ||
        is_pure(target, item.rows)) {
      continue;
    }

    const SplitCandidate split =
        best_split(features, target, item.rows, params.min_samples_leaf);
    if (!split.found) continue;

    node->feature = split.feature;
    node->threshold = split.threshold;
    node->left = std::make_unique<CartNode>();
    node->right = std::make_unique<CartNode>();

    std::vector<int> left_rows, right_rows;
    for (const int r : item.rows) {
      if (features(r, split.feature) <= split.threshold) {
        left_rows.push_back(r);
      } else {
        right_rows.push_back(r);
      }
    }
    stack.push_back({node->left.get(), std::move(left_rows), item.depth + 1});
    stack.push_back({node->right.get(), std::move(right_rows), item.depth + 1});
  }
  return root;
}

Eigen::VectorXd predict_cart(const CartNode& tree, const Eigen::MatrixXd& features) {
  Eigen::VectorXd out(features.rows());
  for (Eigen::Index r = 0; r < features.rows(); ++r) {
    const CartNode* node = &tree;
    while (!node->is_leaf()) {
      node = features(r, node->feature) <= node->threshold ? node->left.get()
                                                           : node->right.get();
    }
    out(r) = node->value;
  }
  return out;
}

int count_leaves(const CartNode& tree) {
  if (tree.is_leaf()) return 1;
  return count_leaves(*tree.left) + count_leaves(*tree.right);
}

}  // namespace gaggam
