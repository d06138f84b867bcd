#include <CLI11.hpp>
#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <nlohmann/json.hpp>

#include "gaggam/complexity.hpp"
#include "gaggam/errors.hpp"
#include "gaggam/experiment.hpp"
#include "gaggam/serialization.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

std::string default_out_dir() {
  const char* env = std::getenv("GAGGAM_OUT");
  return env && *env ? env : "out";
}

struct CommonFlags {
  std::string data_path;
  std::string target = "MedHouseVal";
  std::string out_dir = default_out_dir();
  double test_fraction = 0.2;
  int workers = 1;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--data", flags.data_path, "Input CSV path")->required();
  cmd->add_option("--target", flags.target, "Target column name");
  cmd->add_option("--out", flags.out_dir, "Output directory (or $GAGGAM_OUT)");
  cmd->add_option("--test-frac", flags.test_fraction, "Held-out test fraction")
      ->check(CLI::Range(1e-6, 1.0 - 1e-6));
  cmd->add_option("--workers", flags.workers, "Concurrent model fits")
      ->check(CLI::PositiveNumber);
}

void add_ga_flags(CLI::App* cmd, gaggam::GaConfig& ga) {
  cmd->add_option("--pop", ga.population_size, "Population size (even, >= 4)")
      ->check([](const std::string& s) -> std::string {
        const int v = std::atoi(s.c_str());
        if (v < 4 || v % 2 != 0) return "population must be even and >= 4";
        return "";
      });
  cmd->add_option("--gens", ga.generations, "Generations")->check(CLI::PositiveNumber);
  cmd->add_option("--kfolds", ga.k_folds, "Cross-validation folds")
      ->check(CLI::Range(2, 1000));
  cmd->add_option("--crossover", ga.crossover_prob, "Crossover probability")
      ->check(CLI::Range(0.0, 1.0));
}

void print_banner(const gaggam::ExperimentConfig& config, const std::string& data_path,
                  bool reproduce) {
  nlohmann::json banner;
  banner["data"] = data_path;
  banner["target"] = config.target_column;
  banner["out"] = config.out_dir;
  banner["pop"] = config.ga.population_size;
  banner["gens"] = config.ga.generations;
  banner["kfolds"] = config.ga.k_folds;
  banner["crossover_prob"] = config.ga.crossover_prob;
  banner["test_frac"] = config.test_fraction;
  banner["workers"] = config.ga.workers;
  if (reproduce) {
    banner["seeds"] = gaggam::kReproduceSeeds;
  } else {
    banner["seed"] = config.ga.seed;
  }
  std::cerr << "config " << banner.dump() << '\n';
}

void summarize(const gaggam::RunRecord& record) {
  std::cerr << "seed " << record.seed << ": test rmse (best/knee/penalty) "
            << record.best_by_rmse_test_rmse << " / " << record.knee_test_rmse
            << " / " << record.best_by_penalty_test_rmse << ", cart "
            << record.cart_test_rmse << ", baseline gam "
            << record.baseline_gam_test_rmse << " (penalty "
            << record.baseline_gam_penalty << "), front size "
            << record.front.size() << ", " << record.wall_clock_seconds << "s\n";
}

int cmd_inspect(const std::string& path) {
  const nlohmann::json doc = gaggam::read_json_file(path);

  const auto print_chromosome = [](const gaggam::Chromosome& c) {
    for (std::size_t i = 0; i < c.genes.size(); ++i) {
      const gaggam::Gene& gene = c.genes[i];
      std::cout << "  term " << i << ": ";
      switch (gene.kind) {
        case gaggam::TermKind::kNone:
          std::cout << "none";
          break;
        case gaggam::TermKind::kLinear:
          std::cout << "linear";
          break;
        case gaggam::TermKind::kSpline:
          std::cout << "spline(n_splines=" << *gene.n_splines
                    << ", lambda=" << *gene.lambda << ")";
          break;
      }
      std::cout << (gene.scale ? ", scaled" : "") << '\n';
    }
  };

  if (doc.is_array() && (doc.empty() || doc[0].contains("kind"))) {
    std::cout << "chromosome with " << doc.size() << " genes\n";
    print_chromosome(gaggam::chromosome_from_json(doc));
    return kExitOk;
  }
  if (doc.is_object() && doc.contains("beta")) {
    const gaggam::FittedGam model = gaggam::model_from_json(doc);
    std::cout << "fitted model: " << model.spec.n_features() << " features, "
              << model.beta.size() << " coefficients, sigma2 " << model.sigma2
              << ", edf " << model.edf << ", " << model.n_train << " training rows\n";
    print_chromosome(gaggam::from_model_spec(model.spec));
    return kExitOk;
  }
  if (doc.is_object() && doc.contains("representatives")) {
    const gaggam::RunRecord record = gaggam::run_record_from_json(doc);
    std::cout << "run record for seed " << record.seed << "\n"
              << "  front size " << record.front.size() << "\n"
              << "  knee: cv rmse " << record.knee.rmse << ", penalty "
              << record.knee.penalty << ", test rmse " << record.knee_test_rmse << "\n"
              << "  best_by_rmse: cv rmse " << record.best_by_rmse.rmse
              << ", penalty " << record.best_by_rmse.penalty << ", test rmse "
              << record.best_by_rmse_test_rmse << "\n"
              << "  best_by_penalty: cv rmse " << record.best_by_penalty.rmse
              << ", penalty " << record.best_by_penalty.penalty << ", test rmse "
              << record.best_by_penalty_test_rmse << "\n"
              << "  knee chromosome:\n";
    print_chromosome(record.knee_chromosome);
    return kExitOk;
  }
  throw gaggam::DataError("unrecognized JSON document in '" + path + "'");
}

int cmd_report(const std::string& out_dir) {
  namespace fs = std::filesystem;
  std::vector<gaggam::RunRecord> records;
  std::vector<fs::path> seed_dirs;
  for (const auto& entry : fs::directory_iterator(out_dir)) {
    if (entry.is_directory() && fs::exists(entry.path() / "results.json")) {
      seed_dirs.push_back(entry.path());
    }
  }
  std::sort(seed_dirs.begin(), seed_dirs.end());
  for (const auto& dir : seed_dirs) {
    records.push_back(
        gaggam::run_record_from_json(gaggam::read_json_file((dir / "results.json").string())));
  }
  if (records.empty()) {
    throw gaggam::DataError("no per-seed results.json found under '" + out_dir + "'");
  }
  std::sort(records.begin(), records.end(),
            [](const gaggam::RunRecord& a, const gaggam::RunRecord& b) {
              return a.seed < b.seed;
            });
  gaggam::emit_tables(records, out_dir);
  std::cerr << "wrote tables for " << records.size() << " seeds to " << out_dir << '\n';
  return kExitOk;
}

int cmd_baseline(const CommonFlags& flags, std::uint64_t seed) {
  const gaggam::Dataset data = gaggam::load_csv(flags.data_path, flags.target);
  const gaggam::Split split = gaggam::make_split(data.n_rows(), flags.test_fraction, seed);
  const gaggam::Dataset train_val = gaggam::select_rows(data, split.train_val_indices);
  const gaggam::Dataset test = gaggam::select_rows(data, split.test_indices);

  const gaggam::FittedGam baseline = gaggam::fit(
      gaggam::baseline_gam_spec(data.n_features()), train_val.features, train_val.target);
  const auto cart = gaggam::fit_cart(train_val.features, train_val.target);

  nlohmann::json j;
  j["seed"] = seed;
  j["baseline_gam_test_rmse"] = gaggam::score_on_test(baseline, test);
  j["baseline_gam_penalty"] = gaggam::complexity_penalty(baseline).penalty;
  j["cart_test_rmse"] = gaggam::score_on_test(*cart, test);

  std::filesystem::create_directories(flags.out_dir);
  const std::string path =
      flags.out_dir + "/baseline_" + std::to_string(seed) + ".json";
  gaggam::write_json_file(j, path);
  std::cerr << "baseline seed " << seed << ": gam rmse "
            << j["baseline_gam_test_rmse"].get<double>() << ", cart rmse "
            << j["cart_test_rmse"].get<double>() << ", gam penalty "
            << j["baseline_gam_penalty"].get<double>() << " -> " << path << '\n';
  return kExitOk;
}

void print_data_help() {
  std::cout <<
      "The library never fetches data; point --data at a local CSV with a\n"
      "header row, numeric cells, and the target in a named column\n"
      "(default MedHouseVal).\n"
      "\n"
      "To export the California Housing dataset with scikit-learn:\n"
      "\n"
      "  python3 - <<'EOF'\n"
      "  from sklearn.datasets import fetch_california_housing\n"
      "  fetch_california_housing(as_frame=True).frame.to_csv(\n"
      "      'california_housing.csv', index=False)\n"
      "  EOF\n"
      "\n"
      "The resulting file has 20640 rows and the columns MedInc, HouseAge,\n"
      "AveRooms, AveBedrms, Population, AveOccup, Latitude, Longitude,\n"
      "MedHouseVal.\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Evolves GAM structures with NSGA-II against RMSE and a "
               "complexity penalty"};
  app.require_subcommand(1);

  CommonFlags evolve_flags;
  gaggam::GaConfig evolve_ga;
  std::string evolve_trace;
  bool evolve_cov = false;
  CLI::App* evolve = app.add_subcommand("evolve", "Run the full pipeline for one seed");
  add_common(evolve, evolve_flags);
  add_ga_flags(evolve, evolve_ga);
  evolve->add_option("--seed", evolve_ga.seed, "Random seed");
  evolve->add_option("--trace", evolve_trace, "JSON-lines per-generation trace file");
  evolve->add_flag("--include-covariance", evolve_cov,
                   "Include covariance matrices in serialized models");

  CommonFlags repro_flags;
  gaggam::GaConfig repro_ga;
  CLI::App* reproduce =
      app.add_subcommand("reproduce", "Run seeds 42, 7, 123, 225, 729 and emit tables");
  add_common(reproduce, repro_flags);
  add_ga_flags(reproduce, repro_ga);

  CommonFlags baseline_flags;
  std::uint64_t baseline_seed = 42;
  CLI::App* baseline = app.add_subcommand("baseline", "Fit only the reference models");
  add_common(baseline, baseline_flags);
  baseline->add_option("--seed", baseline_seed, "Random seed");

  std::string report_dir = default_out_dir();
  CLI::App* report =
      app.add_subcommand("report", "Rebuild the tables from per-seed results.json files");
  report->add_option("--out", report_dir, "Directory holding per-seed outputs");

  std::string inspect_path;
  CLI::App* inspect =
      app.add_subcommand("inspect", "Pretty-print a serialized chromosome, model or run");
  inspect->add_option("file", inspect_path, "JSON file")->required();

  CLI::App* data_help =
      app.add_subcommand("data-help", "How to export the California Housing CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (evolve->parsed()) {
      gaggam::ExperimentConfig config;
      config.ga = evolve_ga;
      config.ga.workers = evolve_flags.workers;
      config.test_fraction = evolve_flags.test_fraction;
      config.target_column = evolve_flags.target;
      config.out_dir = evolve_flags.out_dir;
      config.trace_path = evolve_trace;
      config.include_covariance = evolve_cov;
      print_banner(config, evolve_flags.data_path, false);
      const gaggam::Dataset data =
          gaggam::load_csv(evolve_flags.data_path, evolve_flags.target);
      const gaggam::RunRecord record =
          gaggam::run_seed_experiment(data, config, &std::cerr);
      summarize(record);
      return kExitOk;
    }
    if (reproduce->parsed()) {
      gaggam::ExperimentConfig config;
      config.ga = repro_ga;
      config.ga.workers = repro_flags.workers;
      config.test_fraction = repro_flags.test_fraction;
      config.target_column = repro_flags.target;
      config.out_dir = repro_flags.out_dir;
      print_banner(config, repro_flags.data_path, true);
      const gaggam::Dataset data =
          gaggam::load_csv(repro_flags.data_path, repro_flags.target);
      const auto records = gaggam::run_reproduction(data, config, &std::cerr);
      for (const auto& record : records) summarize(record);
      return kExitOk;
    }
    if (baseline->parsed()) return cmd_baseline(baseline_flags, baseline_seed);
    if (report->parsed()) return cmd_report(report_dir);
    if (inspect->parsed()) return cmd_inspect(inspect_path);
    if (data_help->parsed()) {
      print_data_help();
      return kExitOk;
    }
  } catch (const gaggam::DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}
