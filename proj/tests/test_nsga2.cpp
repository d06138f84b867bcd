#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <limits>
#include <map>

#include "gaggam/nsga2.hpp"
#include "support/test_support.hpp"

using namespace gaggam;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Individual ind(double rmse, double penalty) {
  Individual i;
  i.objectives = {rmse, penalty, true};
  return i;
}

std::vector<Individual> to_population(const std::vector<Objectives>& objs) {
  std::vector<Individual> pop;
  for (const auto& o : objs) pop.push_back(ind(o.rmse, o.penalty));
  return pop;
}

}  // namespace

TEST_CASE("dominates") {
  CHECK(dominates({1, 0.1, true}, {2, 0.2, true}));
  CHECK_FALSE(dominates({1, 0.2, true}, {2, 0.1, true}));
  CHECK_FALSE(dominates({2, 0.1, true}, {1, 0.2, true}));
  const Objectives self{1.5, 0.5, true};
  CHECK_FALSE(dominates(self, self));
  CHECK(dominates({1, 0.5, true}, {1, 0.6, true}));  // equal on one axis
}

TEST_CASE("sort: total order gives singleton fronts") {
  auto pop = to_population({{1, 1, true}, {2, 2, true}, {3, 3, true}});
  const auto fronts = fast_nondominated_sort(pop);
  REQUIRE(fronts.size() == 3);
  CHECK(fronts[0] == std::vector<int>{0});
  CHECK(fronts[1] == std::vector<int>{1});
  CHECK(fronts[2] == std::vector<int>{2});
  CHECK(pop[0].rank == 0);
  CHECK(pop[2].rank == 2);
}

TEST_CASE("sort: anti-chain is one front") {
  auto pop = to_population({{1, 3, true}, {2, 2, true}, {3, 1, true}});
  const auto fronts = fast_nondominated_sort(pop);
  REQUIRE(fronts.size() == 1);
  CHECK(fronts[0].size() == 3);
}

TEST_CASE("sort matches the brute-force peeling oracle") {
  Rng rng(909);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + rng.uniform_int(0, 63);
    std::vector<Objectives> objs;
    objs.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      // Coarse grid so duplicates and ties are common.
      objs.push_back({rng.uniform_int(0, 9) / 4.0, rng.uniform_int(0, 9) / 4.0, true});
    }
    auto pop = to_population(objs);
    const auto fronts = fast_nondominated_sort(pop);
    const auto expected = testsupport::oracle_front_peeling(objs);
    REQUIRE(fronts.size() == expected.size());
    for (std::size_t f = 0; f < fronts.size(); ++f) {
      auto got = fronts[f];
      auto want = expected[f];
      std::sort(got.begin(), got.end());
      std::sort(want.begin(), want.end());
      CHECK(got == want);
    }
  }
}

TEST_CASE("crowding distance hand cases") {
  CHECK(crowding_distance({{1, 1, true}}) == std::vector<double>{kInf});
  CHECK(crowding_distance({{1, 2, true}, {2, 1, true}}) ==
        std::vector<double>{kInf, kInf});

  // Evenly spaced anti-chain: the interior point accumulates a full
  // normalized gap per objective.
  const std::vector<double> three =
      crowding_distance({{1, 3, true}, {2, 2, true}, {3, 1, true}});
  CHECK(three[0] == kInf);
  CHECK(three[1] == doctest::Approx(2.0));
  CHECK(three[2] == kInf);

  const std::vector<double> uneven =
      crowding_distance({{0, 1, true}, {0.9, 0.1, true}, {1, 0, true}});
  CHECK(uneven[1] == doctest::Approx(1.0 + 1.0));  // full span on both axes

  CHECK_THROWS_AS(crowding_distance({}), std::invalid_argument);
}

TEST_CASE("crowding ties keep stable input order") {
  // Duplicated objective values: stable sort leaves equal elements in
  // input order, so the boundary infinities land on the first and last
  // occurrences and the middle duplicate gets 0 (zero span contributes
  // nothing).
  const std::vector<Objectives> front = {{1, 1, true}, {1, 1, true}, {1, 1, true}};
  const std::vector<double> crowd = crowding_distance(front);
  CHECK(crowd[0] == kInf);
  CHECK(crowd[1] == 0.0);
  CHECK(crowd[2] == kInf);
}

TEST_CASE("tournament selection follows the crowded comparison") {
  Rng rng(11);
  std::vector<Individual> pop(2);
  pop[0] = ind(1, 1);
  pop[1] = ind(2, 2);
  pop[0].rank = 0;
  pop[1].rank = 1;
  pop[0].crowding = 0.1;
  pop[1].crowding = kInf;
  for (int i = 0; i < 200; ++i) {
    CHECK(tournament_select_index(pop, rng) == 0);  // lower rank always wins
  }

  pop[1].rank = 0;  // equal ranks: larger crowding wins
  for (int i = 0; i < 200; ++i) {
    CHECK(tournament_select_index(pop, rng) == 1);
  }
}

TEST_CASE("tournament between identical individuals is a fair coin") {
  Rng rng(12);
  std::vector<Individual> pop(2, ind(1, 1));
  pop[0].rank = pop[1].rank = 0;
  pop[0].crowding = pop[1].crowding = 1.0;
  int zero = 0;
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    if (tournament_select_index(pop, rng) == 0) ++zero;
  }
  CHECK(std::abs(zero / double(n) - 0.5) < 0.02);
}

TEST_CASE("environmental selection fills by rank then crowding") {
  Rng rng(13);
  std::vector<Individual> combined;
  for (int i = 0; i < 24; ++i) {
    combined.push_back(
        ind(rng.uniform_int(0, 5) / 2.0, rng.uniform_int(0, 5) / 2.0));
  }
  auto pool = combined;
  const std::vector<int> selected = environmental_selection(pool, 12);
  REQUIRE(selected.size() == 12);

  std::vector<bool> chosen(pool.size(), false);
  for (const int i : selected) chosen[static_cast<std::size_t>(i)] = true;
  int worst_selected_rank = 0;
  for (const int i : selected) {
    worst_selected_rank = std::max(worst_selected_rank, pool[static_cast<std::size_t>(i)].rank);
  }
  for (std::size_t i = 0; i < pool.size(); ++i) {
    if (chosen[i]) continue;
    // Every survivor has rank <= every discarded individual's rank.
    CHECK(pool[i].rank >= worst_selected_rank);
    // Within the cut front, survivors' crowding >= discarded crowding.
    if (pool[i].rank == worst_selected_rank) {
      for (const int s : selected) {
        if (pool[static_cast<std::size_t>(s)].rank == worst_selected_rank) {
          CHECK(pool[static_cast<std::size_t>(s)].crowding >= pool[i].crowding);
        }
      }
    }
  }
}

TEST_CASE("config validation") {
  GaConfig config;
  CHECK_NOTHROW(validate_config(config));
  config.population_size = 3;
  CHECK_THROWS_AS(validate_config(config), std::invalid_argument);
  config.population_size = 7;
  CHECK_THROWS_AS(validate_config(config), std::invalid_argument);
  config.population_size = 8;
  config.crossover_prob = 1.5;
  CHECK_THROWS_AS(validate_config(config), std::invalid_argument);
}

TEST_CASE("toy run: front validity, elitism, truncation, determinism") {
  const Dataset data = testsupport::make_sine_linear_dataset(200, 2, 0.15, 99);
  const CvPlan plan = make_cv_plan(data.n_rows(), 3, 31);

  GaConfig config;
  config.population_size = 8;
  config.generations = 3;
  config.k_folds = 3;
  config.seed = 7;

  // Track the non-dominated objective set generation by generation: no
  // point may vanish unless a new point dominates it (elitism), and
  // hypervolume against a fixed reference must be non-decreasing.
  std::vector<std::vector<Objectives>> fronts_per_gen;
  RunHooks hooks;
  hooks.observer = [&](int, const std::vector<Individual>& combined,
                       const std::vector<int>& selected) {
    std::vector<Objectives> front;
    for (const int i : selected) {
      if (combined[static_cast<std::size_t>(i)].rank == 0) {
        front.push_back(combined[static_cast<std::size_t>(i)].objectives);
      }
    }
    fronts_per_gen.push_back(front);

    // Truncation invariant on the combined pool.
    int worst_rank = 0;
    std::vector<bool> chosen(combined.size(), false);
    for (const int i : selected) {
      chosen[static_cast<std::size_t>(i)] = true;
      worst_rank = std::max(worst_rank, combined[static_cast<std::size_t>(i)].rank);
    }
    for (std::size_t i = 0; i < combined.size(); ++i) {
      if (!chosen[i]) CHECK(combined[i].rank >= worst_rank);
    }
  };

  const GaResult result = run(config, data, plan, hooks);
  REQUIRE_FALSE(result.front.empty());

  // Final front is pairwise non-dominated.
  for (const Individual& a : result.front) {
    for (const Individual& b : result.front) {
      if (&a != &b) CHECK_FALSE(dominates(a.objectives, b.objectives));
    }
  }

  // Hypervolume reference: worse than anything a run can produce.
  Evaluator sentinel_probe(data, plan);
  const double ref_rmse = sentinel_probe.sentinel_rmse() * 1.1;
  const double ref_penalty = 1.1;
  double previous = -1.0;
  for (const auto& front : fronts_per_gen) {
    const double hv = testsupport::hypervolume_2d(front, ref_rmse, ref_penalty);
    CHECK(hv >= previous - 1e-12);
    previous = hv;
  }

  // Elitism: every surviving non-dominated point either persists or is
  // dominated by some point of the next front.
  for (std::size_t g = 0; g + 1 < fronts_per_gen.size(); ++g) {
    for (const Objectives& old_point : fronts_per_gen[g]) {
      bool accounted = false;
      for (const Objectives& new_point : fronts_per_gen[g + 1]) {
        if (new_point == old_point || dominates(new_point, old_point) ||
            (new_point.rmse == old_point.rmse &&
             new_point.penalty == old_point.penalty)) {
          accounted = true;
          break;
        }
      }
      CHECK(accounted);
    }
  }

  // Identical config reruns bit-identically, regardless of worker count.
  GaConfig parallel = config;
  parallel.workers = 6;
  const GaResult rerun = run(parallel, data, plan);
  REQUIRE(rerun.front.size() == result.front.size());
  for (std::size_t i = 0; i < rerun.front.size(); ++i) {
    CHECK(rerun.front[i].objectives == result.front[i].objectives);
    CHECK(rerun.front[i].chromosome == result.front[i].chromosome);
  }
}
