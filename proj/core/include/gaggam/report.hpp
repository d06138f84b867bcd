#ifndef GAGGAM_REPORT_HPP_
#define GAGGAM_REPORT_HPP_

#include <string>
#include <vector>

#include "gaggam/baselines.hpp"
#include "gaggam/dataset.hpp"
#include "gaggam/pareto.hpp"

namespace gaggam {

// One point of a reported front.
struct FrontPoint {
  double rmse = 0.0;
  double penalty = 0.0;
  std::string key;  // canonical chromosome key

  bool operator==(const FrontPoint&) const = default;
};

// Everything one seed's experiment reports.  Test RMSEs are computed on
// the held-out partition only, after one refit on the full train+val
// rows.  wall_clock_seconds is informational and never serialized, so
// emitted files stay byte-identical across reruns and worker counts.
struct RunRecord {
  std::uint64_t seed = 0;

  // config echo
  int population_size = 0;
  int generations = 0;
  double crossover_prob = 0.0;
  int k_folds = 0;
  double test_fraction = 0.0;
  std::string target_column;

  Objectives knee;
  Objectives best_by_rmse;
  Objectives best_by_penalty;
  double knee_test_rmse = 0.0;
  double best_by_rmse_test_rmse = 0.0;
  double best_by_penalty_test_rmse = 0.0;

  double cart_test_rmse = 0.0;
  double baseline_gam_test_rmse = 0.0;
  double baseline_gam_penalty = 0.0;

  std::vector<FrontPoint> front;
  Chromosome knee_chromosome;
  Chromosome best_by_rmse_chromosome;
  Chromosome best_by_penalty_chromosome;

  double wall_clock_seconds = 0.0;  // excluded from serialization and ==

  bool operator==(const RunRecord& other) const;
};

double score_on_test(const FittedGam& model, const Dataset& test);
double score_on_test(const CartNode& tree, const Dataset& test);

// rmse_table.csv, penalty_table.csv and a combined results.json under
// out_dir.  Cells are rendered at 6 decimals.
void emit_tables(const std::vector<RunRecord>& records, const std::string& out_dir);

// Axis range covering [lo, hi] with a 5% margin on each side (a positive
// pad is used even when the data range is degenerate).
std::pair<double, double> plot_axis_limits(double lo, double hi);

// Scatter of (penalty, rmse) for a front with distinct highlight markers
// for the three representatives.  Output bytes depend only on the inputs.
void emit_pareto_plot(const std::vector<Individual>& front,
                      const FrontSelection& selection, const std::string& out_path);

// Effect curve plus shaded 95% band for one term; inactive terms render an
// "Inactive" annotation panel instead of a curve.
void emit_partial_dependence_plot(const FittedGam& model, int feature_index,
                                  const std::string& out_path,
                                  const std::string& feature_name = "");

}  // namespace gaggam

#endif  // GAGGAM_REPORT_HPP_
