#ifndef GAGGAM_NSGA2_HPP_
#define GAGGAM_NSGA2_HPP_

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "gaggam/evaluation.hpp"
#include "gaggam/genome.hpp"

namespace gaggam {

struct Individual {
  Chromosome chromosome;
  Objectives objectives;
  int rank = 0;
  double crowding = 0.0;  // std::numeric_limits<double>::infinity() on boundaries
};

struct GaConfig {
  int population_size = 80;
  int generations = 50;
  double crossover_prob = 0.3;
  int k_folds = 5;
  std::uint64_t seed = 42;
  int workers = 1;
};

// Throws std::invalid_argument on a bad configuration (population must be
// even and >= 4, generations >= 1, k_folds >= 2, crossover in [0, 1]).
void validate_config(const GaConfig& config);

// a dominates b iff a is no worse in both objectives and better in one.
bool dominates(const Objectives& a, const Objectives& b);

// Deb's fast non-dominated sort.  Returns fronts as index lists (front 0 =
// non-dominated set) and writes ranks back into the individuals.
std::vector<std::vector<int>> fast_nondominated_sort(std::vector<Individual>& pop);

// Standard NSGA-II crowding over one front: boundary points per objective
// get infinity, interior points accumulate normalized neighbor gaps.
// Ties in objective values keep stable input order.
std::vector<double> crowding_distance(const std::vector<Objectives>& front);

// Binary tournament by crowded comparison: lower rank, then larger
// crowding, then a coin flip.
int tournament_select_index(const std::vector<Individual>& pop, Rng& rng);
const Individual& tournament_select(const std::vector<Individual>& pop, Rng& rng);

// mu+lambda environmental selection: sorts the combined population, takes
// whole fronts, then crowding-truncates the cut front.  Writes rank and
// crowding for every combined member; returns the selected indices in the
// order they enter the next population.
std::vector<int> environmental_selection(std::vector<Individual>& combined,
                                         int target_size);

struct GenerationStat {
  int generation = 0;
  double best_rmse = 0.0;
  double best_penalty = 0.0;
  int front_size = 0;
};

struct GaResult {
  std::vector<Individual> population;  // final, ranked and crowded
  std::vector<Individual> front;       // final first front, deduplicated
  std::vector<GenerationStat> history;
};

struct RunHooks {
  std::ostream* progress = nullptr;  // one line per generation
  std::string trace_path;            // optional JSON-lines trace
  // Called after each environmental selection with the combined 2N
  // population (ranks/crowding assigned) and the selected indices.
  std::function<void(int generation, const std::vector<Individual>& combined,
                     const std::vector<int>& selected)>
      observer;
};

// The generational loop.  Variation randomness is drawn from per-slot
// streams derived from the seed, and evaluation gathers results by slot,
// so the outcome is a pure function of (config, data, plan) regardless of
// worker count.
GaResult run(const GaConfig& config, const Dataset& train_val,
             const CvPlan& plan, const RunHooks& hooks = {});

}  // namespace gaggam

#endif  // GAGGAM_NSGA2_HPP_
