#include "gaggam/evaluation.hpp"

#include <cmath>
#include <stdexcept>
#include <thread>

#include "gaggam/complexity.hpp"
#include "gaggam/errors.hpp"
#include "gaggam/rng.hpp"

namespace gaggam {

CvPlan make_cv_plan(int n_rows, int k, std::uint64_t seed) {
  if (k < 2) throw DataError("cross-validation needs k >= 2");
  if (n_rows < k) throw DataError("fewer rows than folds");

  std::vector<int> order(static_cast<std::size_t>(n_rows));
  for (int i = 0; i < n_rows; ++i) order[static_cast<std::size_t>(i)] = i;
  Rng rng = Rng::stream(seed, /*id=*/0xF01D5ULL);
  rng.shuffle(order);

  CvPlan plan;
  plan.k = k;
  plan.seed = seed;
  plan.folds.resize(static_cast<std::size_t>(k));
  const int base = n_rows / k;
  const int extra = n_rows % k;
  int pos = 0;
  for (int f = 0; f < k; ++f) {
    const int size = base + (f < extra ? 1 : 0);
    auto& fold = plan.folds[static_cast<std::size_t>(f)];
    fold.assign(order.begin() + pos, order.begin() + pos + size);
    pos += size;
  }
  return plan;
}

double rmse(const Eigen::VectorXd& pred, const Eigen::VectorXd& truth) {
  if (pred.size() != truth.size() || pred.size() == 0) {
    throw std::invalid_argument("rmse needs equal-length, non-empty vectors");
  }
  return std::sqrt((pred - truth).squaredNorm() / static_cast<double>(pred.size()));
}

Evaluator::Evaluator(const Dataset& train_val, CvPlan plan, int workers)
    : data_(train_val), plan_(std::move(plan)), workers_(std::max(workers, 1)) {
  int covered = 0;
  for (const auto& fold : plan_.folds) covered += static_cast<int>(fold.size());
  if (covered != data_.n_rows()) {
    throw std::invalid_argument("cv plan does not cover the train+val rows");
  }

  // Failed individuals must be dominated by every valid one.
  sentinel_rmse_ = 10.0 * (data_.target.maxCoeff() - data_.target.minCoeff());

  fold_data_.resize(plan_.folds.size());
  for (std::size_t f = 0; f < plan_.folds.size(); ++f) {
    std::vector<int> train_rows;
    train_rows.reserve(static_cast<std::size_t>(data_.n_rows()));
    for (std::size_t g = 0; g < plan_.folds.size(); ++g) {
      if (g == f) continue;
      train_rows.insert(train_rows.end(), plan_.folds[g].begin(), plan_.folds[g].end());
    }
    const Dataset train = select_rows(data_, train_rows);
    const Dataset test = select_rows(data_, plan_.folds[f]);
    fold_data_[f] = {train.features, train.target, test.features, test.target};
  }
}

Objectives Evaluator::evaluate_uncached(const Chromosome& c) const {
  const ModelSpec spec = to_model_spec(c);
  try {
    double fold_sum = 0.0;
    for (const FoldData& fold : fold_data_) {
      const FittedGam model = fit(spec, fold.train_features, fold.train_target);
      ++fit_count_;
      fold_sum += rmse(predict(model, fold.test_features), fold.test_target);
    }

    // The penalty is scored on the model a user would actually receive:
    // one refit on the full train+val rows.
    const FittedGam full = fit(spec, data_.features, data_.target);
    ++fit_count_;

    Objectives obj;
    obj.rmse = fold_sum / static_cast<double>(fold_data_.size());
    obj.penalty = complexity_penalty(full).penalty;
    obj.valid = true;
    return obj;
  } catch (const FitFailure&) {
    return Objectives{sentinel_rmse_, 1.0, false};
  }
}

Objectives Evaluator::evaluate(const Chromosome& c) const {
  return evaluate_uncached(c);
}

std::vector<Objectives> Evaluator::evaluate_population(
    const std::vector<Chromosome>& pop) {
  std::vector<Objectives> results(pop.size());

  // Resolve cache hits and collect the distinct keys that need a fit, in
  // first-occurrence order so results never depend on worker count.
  std::vector<std::string> keys(pop.size());
  std::vector<char> resolved(pop.size(), 0);
  std::vector<int> unique_slots;
  {
    std::lock_guard<std::mutex> lock(cache_mutex_);
    std::unordered_map<std::string, int> first_slot;
    for (std::size_t i = 0; i < pop.size(); ++i) {
      keys[i] = pop[i].canonical_key();
      if (auto it = cache_.find(keys[i]); it != cache_.end()) {
        results[i] = it->second;
        resolved[i] = 1;
        continue;
      }
      if (first_slot.emplace(keys[i], static_cast<int>(i)).second) {
        unique_slots.push_back(static_cast<int>(i));
      }
    }
  }

  if (!unique_slots.empty()) {
    std::vector<Objectives> fresh(unique_slots.size());
    const int n_workers =
        std::min<int>(workers_, static_cast<int>(unique_slots.size()));
    if (n_workers <= 1) {
      for (std::size_t u = 0; u < unique_slots.size(); ++u) {
        fresh[u] = evaluate_uncached(pop[static_cast<std::size_t>(unique_slots[u])]);
      }
    } else {
      std::vector<std::thread> threads;
      std::exception_ptr error;
      std::mutex error_mutex;
      std::atomic<std::size_t> next{0};
      threads.reserve(static_cast<std::size_t>(n_workers));
      for (int w = 0; w < n_workers; ++w) {
        threads.emplace_back([&] {
          for (;;) {
            const std::size_t u = next.fetch_add(1);
            if (u >= unique_slots.size()) return;
            try {
              fresh[u] =
                  evaluate_uncached(pop[static_cast<std::size_t>(unique_slots[u])]);
            } catch (...) {
              std::lock_guard<std::mutex> lock(error_mutex);
              if (!error) error = std::current_exception();
              return;
            }
          }
        });
      }
      for (auto& t : threads) t.join();
      if (error) std::rethrow_exception(error);
    }

    std::lock_guard<std::mutex> lock(cache_mutex_);
    for (std::size_t u = 0; u < unique_slots.size(); ++u) {
      cache_[keys[static_cast<std::size_t>(unique_slots[u])]] = fresh[u];
    }
  }

  // Fill every remaining slot from the cache; duplicates share one value.
  {
    std::lock_guard<std::mutex> lock(cache_mutex_);
    for (std::size_t i = 0; i < pop.size(); ++i) {
      if (!resolved[i]) results[i] = cache_.at(keys[i]);
    }
  }
  return results;
}

std::size_t Evaluator::cache_size() const {
  std::lock_guard<std::mutex> lock(cache_mutex_);
  return cache_.size();
}

}  // namespace gaggam
