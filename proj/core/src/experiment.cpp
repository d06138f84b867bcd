#include "gaggam/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <ostream>
#include <unordered_set>

#include "gaggam/complexity.hpp"
#include "gaggam/errors.hpp"
#include "gaggam/serialization.hpp"

namespace gaggam {

namespace {

void check_disjoint(const Split& split) {
  std::unordered_set<int> test(split.test_indices.begin(), split.test_indices.end());
  for (const int r : split.train_val_indices) {
    if (test.count(r)) throw std::logic_error("train/test partitions overlap");
  }
}

}  // namespace

RunRecord run_seed_experiment(const Dataset& data, const ExperimentConfig& config,
                              std::ostream* progress) {
  const auto started = std::chrono::steady_clock::now();

  GaConfig ga = config.ga;
  validate_config(ga);

  const Split split = make_split(data.n_rows(), config.test_fraction, ga.seed);
  check_disjoint(split);
  const Dataset train_val = select_rows(data, split.train_val_indices);
  const Dataset test = select_rows(data, split.test_indices);
  const CvPlan plan = make_cv_plan(train_val.n_rows(), ga.k_folds, ga.seed);

  RunHooks hooks;
  hooks.progress = progress;
  hooks.trace_path = config.trace_path;
  const GaResult ga_result = run(ga, train_val, plan, hooks);

  const FrontSelection selection = select_representatives(ga_result.front);

  // Every reported test RMSE comes from one refit on the full train+val
  // rows; this is the only place the test partition is used.
  const FittedGam knee_model =
      fit(to_model_spec(selection.knee.chromosome), train_val.features, train_val.target);
  const FittedGam rmse_model = fit(to_model_spec(selection.best_by_rmse.chromosome),
                                   train_val.features, train_val.target);
  const FittedGam penalty_model =
      fit(to_model_spec(selection.best_by_penalty.chromosome), train_val.features,
          train_val.target);

  const FittedGam baseline_model = fit(baseline_gam_spec(data.n_features()),
                                       train_val.features, train_val.target);
  const auto cart = fit_cart(train_val.features, train_val.target);

  RunRecord record;
  record.seed = ga.seed;
  record.population_size = ga.population_size;
  record.generations = ga.generations;
  record.crossover_prob = ga.crossover_prob;
  record.k_folds = ga.k_folds;
  record.test_fraction = config.test_fraction;
  record.target_column = config.target_column;

  record.knee = selection.knee.objectives;
  record.best_by_rmse = selection.best_by_rmse.objectives;
  record.best_by_penalty = selection.best_by_penalty.objectives;
  record.knee_test_rmse = score_on_test(knee_model, test);
  record.best_by_rmse_test_rmse = score_on_test(rmse_model, test);
  record.best_by_penalty_test_rmse = score_on_test(penalty_model, test);
  record.cart_test_rmse = score_on_test(*cart, test);
  record.baseline_gam_test_rmse = score_on_test(baseline_model, test);
  record.baseline_gam_penalty = complexity_penalty(baseline_model).penalty;

  for (const Individual& ind : ga_result.front) {
    record.front.push_back({ind.objectives.rmse, ind.objectives.penalty,
                            ind.chromosome.canonical_key()});
  }
  record.knee_chromosome = selection.knee.chromosome;
  record.best_by_rmse_chromosome = selection.best_by_rmse.chromosome;
  record.best_by_penalty_chromosome = selection.best_by_penalty.chromosome;

  record.wall_clock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

  if (config.emit_outputs) {
    const std::string seed_dir = config.out_dir + "/" + std::to_string(ga.seed);
    std::filesystem::create_directories(seed_dir);
    write_json_file(run_record_to_json(record), seed_dir + "/results.json");
    write_json_file(model_to_json(knee_model, config.include_covariance),
                    seed_dir + "/knee_model.json");
    emit_pareto_plot(ga_result.front, selection, seed_dir + "/pareto.svg");
    for (int f = 0; f < data.n_features(); ++f) {
      const std::string name = data.feature_names.empty()
                                   ? "x" + std::to_string(f)
                                   : data.feature_names[static_cast<std::size_t>(f)];
      emit_partial_dependence_plot(knee_model, f, seed_dir + "/pd_" + name + ".svg",
                                   name);
    }
  }
  return record;
}

std::vector<RunRecord> run_reproduction(const Dataset& data, ExperimentConfig config,
                                        std::ostream* progress) {
  std::vector<RunRecord> records;
  const std::string trace_base = config.trace_path;
  for (const std::uint64_t seed : kReproduceSeeds) {
    config.ga.seed = seed;
    if (!trace_base.empty()) {
      config.trace_path = trace_base + "." + std::to_string(seed);
    }
    if (progress) *progress << "== seed " << seed << " ==\n";
    records.push_back(run_seed_experiment(data, config, progress));
  }
  emit_tables(records, config.out_dir);
  return records;
}

}  // namespace gaggam
