#include "gaggam/nsga2.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <unordered_set>

#include "gaggam/errors.hpp"

namespace gaggam {

namespace {

constexpr std::uint64_t kInitStreamId = 0x1717ULL;
constexpr std::uint64_t kVariationStreamId = 0xCAFEULL;

double objective(const Objectives& o, int axis) {
  return axis == 0 ? o.rmse : o.penalty;
}

// rank asc, then crowding desc; exact ties fall through to the caller.
int crowded_winner(const std::vector<Individual>& pop, int a, int b, Rng& rng) {
  const Individual& ia = pop[static_cast<std::size_t>(a)];
  const Individual& ib = pop[static_cast<std::size_t>(b)];
  if (ia.rank != ib.rank) return ia.rank < ib.rank ? a : b;
  if (ia.crowding != ib.crowding) return ia.crowding > ib.crowding ? a : b;
  return rng.coin() ? a : b;
}

}  // namespace

void validate_config(const GaConfig& config) {
  if (config.population_size < 4 || config.population_size % 2 != 0) {
    throw std::invalid_argument("population size must be even and >= 4");
  }
  if (config.generations < 1) throw std::invalid_argument("generations must be >= 1");
  if (config.k_folds < 2) throw std::invalid_argument("k_folds must be >= 2");
  if (config.crossover_prob < 0.0 || config.crossover_prob > 1.0) {
    throw std::invalid_argument("crossover probability must be in [0, 1]");
  }
  if (config.workers < 1) throw std::invalid_argument("workers must be >= 1");
}

bool dominates(const Objectives& a, const Objectives& b) {
  return a.rmse <= b.rmse && a.penalty <= b.penalty &&
         (a.rmse < b.rmse || a.penalty < b.penalty);
}

std::vector<std::vector<int>> fast_nondominated_sort(std::vector<Individual>& pop) {
  const int n = static_cast<int>(pop.size());
  std::vector<std::vector<int>> dominated(static_cast<std::size_t>(n));
  std::vector<int> dominator_count(static_cast<std::size_t>(n), 0);

  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const Objectives& oi = pop[static_cast<std::size_t>(i)].objectives;
      const Objectives& oj = pop[static_cast<std::size_t>(j)].objectives;
      if (dominates(oi, oj)) {
        dominated[static_cast<std::size_t>(i)].push_back(j);
        ++dominator_count[static_cast<std::size_t>(j)];
      } else if (dominates(oj, oi)) {
        dominated[static_cast<std::size_t>(j)].push_back(i);
        ++dominator_count[static_cast<std::size_t>(i)];
      }
    }
  }

  std::vector<std::vector<int>> fronts;
  std::vector<int> current;
  for (int i = 0; i < n; ++i) {
    if (dominator_count[static_cast<std::size_t>(i)] == 0) current.push_back(i);
  }
  while (!current.empty()) {
    for (const int i : current) {
      pop[static_cast<std::size_t>(i)].rank = static_cast<int>(fronts.size());
    }
    std::vector<int> next;
    for (const int i : current) {
      for (const int j : dominated[static_cast<std::size_t>(i)]) {
        if (--dominator_count[static_cast<std::size_t>(j)] == 0) next.push_back(j);
      }
    }
    fronts.push_back(std::move(current));
    current = std::move(next);
  }
  return fronts;
}

std::vector<double> crowding_distance(const std::vector<Objectives>& front) {
  const int n = static_cast<int>(front.size());
  if (n == 0) throw std::invalid_argument("crowding of an empty front");
  constexpr double inf = std::numeric_limits<double>::infinity();
  if (n <= 2) return std::vector<double>(static_cast<std::size_t>(n), inf);

  std::vector<double> distance(static_cast<std::size_t>(n), 0.0);
  std::vector<int> order(static_cast<std::size_t>(n));
  for (int axis = 0; axis < 2; ++axis) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return objective(front[static_cast<std::size_t>(a)], axis) <
             objective(front[static_cast<std::size_t>(b)], axis);
    });
    const double span =
        objective(front[static_cast<std::size_t>(order.back())], axis) -
        objective(front[static_cast<std::size_t>(order.front())], axis);
    distance[static_cast<std::size_t>(order.front())] = inf;
    distance[static_cast<std::size_t>(order.back())] = inf;
    if (span <= 0.0) continue;
    for (int k = 1; k + 1 < n; ++k) {
      const double gap =
          objective(front[static_cast<std::size_t>(order[k + 1])], axis) -
          objective(front[static_cast<std::size_t>(order[k - 1])], axis);
      distance[static_cast<std::size_t>(order[static_cast<std::size_t>(k)])] +=
          gap / span;
    }
  }
  return distance;
}

int tournament_select_index(const std::vector<Individual>& pop, Rng& rng) {
  if (pop.empty()) throw std::invalid_argument("selection from an empty population");
  const int n = static_cast<int>(pop.size());
  const int a = rng.uniform_int(0, n - 1);
  const int b = rng.uniform_int(0, n - 1);
  return crowded_winner(pop, a, b, rng);
}

const Individual& tournament_select(const std::vector<Individual>& pop, Rng& rng) {
  return pop[static_cast<std::size_t>(tournament_select_index(pop, rng))];
}

std::vector<int> environmental_selection(std::vector<Individual>& combined,
                                         int target_size) {
  if (static_cast<int>(combined.size()) < target_size) {
    throw std::invalid_argument("combined population smaller than target");
  }
  const std::vector<std::vector<int>> fronts = fast_nondominated_sort(combined);

  for (const auto& front : fronts) {
    std::vector<Objectives> objs;
    objs.reserve(front.size());
    for (const int i : front) objs.push_back(combined[static_cast<std::size_t>(i)].objectives);
    const std::vector<double> crowd = crowding_distance(objs);
    for (std::size_t k = 0; k < front.size(); ++k) {
      combined[static_cast<std::size_t>(front[k])].crowding = crowd[k];
    }
  }

  std::vector<int> selected;
  selected.reserve(static_cast<std::size_t>(target_size));
  for (const auto& front : fronts) {
    if (static_cast<int>(selected.size() + front.size()) <= target_size) {
      selected.insert(selected.end(), front.begin(), front.end());
      if (static_cast<int>(selected.size()) == target_size) break;
      continue;
    }
    // Cut front: keep the most isolated members, stable on ties.
    std::vector<int> by_crowding = front;
    std::stable_sort(by_crowding.begin(), by_crowding.end(), [&](int a, int b) {
      return combined[static_cast<std::size_t>(a)].crowding >
             combined[static_cast<std::size_t>(b)].crowding;
    });
    const int need = target_size - static_cast<int>(selected.size());
    selected.insert(selected.end(), by_crowding.begin(), by_crowding.begin() + need);
    break;
  }
  return selected;
}

GaResult run(const GaConfig& config, const Dataset& train_val, const CvPlan& plan,
             const RunHooks& hooks) {
  validate_config(config);
  const int n = config.population_size;
  const int n_features = train_val.n_features();

  Evaluator evaluator(train_val, plan, config.workers);

  std::ofstream trace;
  if (!hooks.trace_path.empty()) {
    trace.open(hooks.trace_path);
    if (!trace) throw DataError("cannot write trace file '" + hooks.trace_path + "'");
  }

  std::vector<Individual> pop(static_cast<std::size_t>(n));
  {
    Rng init_rng = Rng::stream(config.seed, kInitStreamId);
    std::vector<Chromosome> chromosomes(static_cast<std::size_t>(n));
    for (auto& c : chromosomes) c = smart_init(n_features, init_rng);
    const std::vector<Objectives> objs = evaluator.evaluate_population(chromosomes);
    for (int i = 0; i < n; ++i) {
      pop[static_cast<std::size_t>(i)].chromosome = std::move(chromosomes[static_cast<std::size_t>(i)]);
      pop[static_cast<std::size_t>(i)].objectives = objs[static_cast<std::size_t>(i)];
    }
  }
  environmental_selection(pop, n);  // assigns initial ranks and crowding

  GaResult result;
  for (int g = 0; g < config.generations; ++g) {
    const double rate = adaptive_rate(g);

    // Variation randomness comes from one stream per offspring pair,
    // derived from (seed, generation, pair), never from a worker.
    std::vector<Chromosome> offspring;
    offspring.reserve(static_cast<std::size_t>(n));
    for (int pair = 0; pair < n / 2; ++pair) {
      Rng rng = Rng::stream(config.seed, kVariationStreamId + static_cast<std::uint64_t>(g),
                            static_cast<std::uint64_t>(pair));
      const Individual& parent_a = tournament_select(pop, rng);
      const Individual& parent_b = tournament_select(pop, rng);
      auto [child_a, child_b] = uniform_crossover(
          parent_a.chromosome, parent_b.chromosome, config.crossover_prob, rng);
      offspring.push_back(mutate(child_a, rate, rng));
      offspring.push_back(mutate(child_b, rate, rng));
    }

    const std::vector<Objectives> objs = evaluator.evaluate_population(offspring);

    std::vector<Individual> combined = pop;
    combined.reserve(static_cast<std::size_t>(2 * n));
    for (int i = 0; i < n; ++i) {
      Individual child;
      child.chromosome = std::move(offspring[static_cast<std::size_t>(i)]);
      child.objectives = objs[static_cast<std::size_t>(i)];
      combined.push_back(std::move(child));
    }

    const std::vector<int> selected = environmental_selection(combined, n);
    std::vector<Individual> next;
    next.reserve(static_cast<std::size_t>(n));
    for (const int idx : selected) next.push_back(combined[static_cast<std::size_t>(idx)]);

    if (hooks.observer) hooks.observer(g, combined, selected);
    pop = std::move(next);

    GenerationStat stat;
    stat.generation = g;
    stat.best_rmse = std::numeric_limits<double>::infinity();
    stat.best_penalty = std::numeric_limits<double>::infinity();
    for (const Individual& ind : pop) {
      if (!ind.objectives.valid) continue;
      stat.best_rmse = std::min(stat.best_rmse, ind.objectives.rmse);
      stat.best_penalty = std::min(stat.best_penalty, ind.objectives.penalty);
      }
    stat.front_size = static_cast<int>(
        std::count_if(pop.begin(), pop.end(), [](const Individual& ind) {
          return ind.rank == 0;
        }));
    result.history.push_back(stat);

    if (hooks.progress) {
      *hooks.progress << "generation " << g << "  best_rmse " << stat.best_rmse
                      << "  best_penalty " << stat.best_penalty << "  front "
                      << stat.front_size << '\n';
    }
    if (trace.is_open()) {
      trace << "{\"generation\":" << g << ",\"best_rmse\":" << stat.best_rmse
            << ",\"best_penalty\":" << stat.best_penalty
            << ",\"front_size\":" << stat.front_size << "}\n";
    }
  }

  // Final first front, deduplicated by canonical key and sorted for
  // reproducible reporting.
  std::unordered_set<std::string> seen;
  for (const Individual& ind : pop) {
    if (ind.rank != 0) continue;
    if (seen.insert(ind.chromosome.canonical_key()).second) {
      result.front.push_back(ind);
    }
  }
  std::sort(result.front.begin(), result.front.end(),
            [](const Individual& a, const Individual& b) {
              if (a.objectives.rmse != b.objectives.rmse) {
                return a.objectives.rmse < b.objectives.rmse;
              }
              if (a.objectives.penalty != b.objectives.penalty) {
                return a.objectives.penalty < b.objectives.penalty;
              }
              return a.chromosome.canonical_key() < b.chromosome.canonical_key();
            });
  result.population = std::move(pop);
  return result;
}

}  // namespace gaggam
