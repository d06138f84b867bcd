#ifndef GAGGAM_EXPERIMENT_HPP_
#define GAGGAM_EXPERIMENT_HPP_

#include <iosfwd>
#include <string>
#include <vector>

#include "gaggam/nsga2.hpp"
#include "gaggam/report.hpp"

namespace gaggam {

// Seeds used by the `reproduce` subcommand.
inline const std::vector<std::uint64_t> kReproduceSeeds = {42, 7, 123, 225, 729};

struct ExperimentConfig {
  GaConfig ga;
  double test_fraction = 0.2;
  std::string target_column = "MedHouseVal";
  std::string out_dir = "out";
  std::string trace_path;
  bool include_covariance = false;
  bool emit_outputs = true;
};

// End-to-end pipeline for one seed: split, cross-validation plan, GA run,
// representative refits, baseline fits, test scoring, and (optionally)
// file emission under out_dir/{seed}/.
RunRecord run_seed_experiment(const Dataset& data, const ExperimentConfig& config,
                              std::ostream* progress = nullptr);

// Runs kReproduceSeeds sequentially and emits the combined tables.
std::vector<RunRecord> run_reproduction(const Dataset& data,
                                        ExperimentConfig config,
                                        std::ostream* progress = nullptr);

}  // namespace gaggam

#endif  // GAGGAM_EXPERIMENT_HPP_
