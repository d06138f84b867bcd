#ifndef GAGGAM_EVALUATION_HPP_
#define GAGGAM_EVALUATION_HPP_

#include <Eigen/Dense>
#include <atomic>
#include <cstdint>
#include <mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "gaggam/dataset.hpp"
#include "gaggam/genome.hpp"

namespace gaggam {

// The two minimized objectives.  valid == false means some fold fit or the
// full refit failed; rmse and penalty then hold worst-case sentinels
// (10 * range(y) and 1) so such individuals are dominated by every valid one.
struct Objectives {
  double rmse = 0.0;
  double penalty = 0.0;
  bool valid = true;

  bool operator==(const Objectives&) const = default;
};

// Disjoint, near-equal, seed-reproducible folds over the train+val rows.
struct CvPlan {
  int k = 5;
  std::vector<std::vector<int>> folds;
  std::uint64_t seed = 0;
};

CvPlan make_cv_plan(int n_rows, int k, std::uint64_t seed);

double rmse(const Eigen::VectorXd& pred, const Eigen::VectorXd& truth);

// Turns chromosomes into objectives against a fixed train+val dataset and
// CV plan.  Holds only the train+val rows, so nothing downstream of it can
// touch the test partition.  Results are memoized by canonical key; cached
// and fresh values are bit-identical because evaluation is deterministic.
class Evaluator {
 public:
  // Copies the train+val view; fold train/test subsets are prematerialized.
  Evaluator(const Dataset& train_val, CvPlan plan, int workers = 1);

  // CV RMSE averaged over folds (scalers/bases rebuilt per training fold)
  // plus the complexity penalty of one refit on all train+val rows.
  // Fit failures become valid=false sentinels, never exceptions.
  Objectives evaluate(const Chromosome& c) const;

  // Memoized, order-preserving map of evaluate over the population.
  // Duplicate keys are fitted once; workers only change wall clock.
  std::vector<Objectives> evaluate_population(const std::vector<Chromosome>& pop);

  const Dataset& train_val() const { return data_; }
  const CvPlan& plan() const { return plan_; }
  double sentinel_rmse() const { return sentinel_rmse_; }
  int workers() const { return workers_; }

  std::size_t cache_size() const;
  std::uint64_t fit_count() const { return fit_count_; }

 private:
  Objectives evaluate_uncached(const Chromosome& c) const;

  Dataset data_;
  CvPlan plan_;
  int workers_ = 1;
  double sentinel_rmse_ = 0.0;

  struct FoldData {
    Eigen::MatrixXd train_features;
    Eigen::VectorXd train_target;
    Eigen::MatrixXd test_features;
    Eigen::VectorXd test_target;
  };
  std::vector<FoldData> fold_data_;

  mutable std::mutex cache_mutex_;
  std::unordered_map<std::string, Objectives> cache_;
  mutable std::atomic<std::uint64_t> fit_count_ = 0;
};

}  // namespace gaggam

#endif  // GAGGAM_EVALUATION_HPP_
