#include "gaggam/serialization.hpp"

#include <fstream>
#include <limits>

#include "gaggam/errors.hpp"

namespace gaggam {

namespace {

std::string kind_name(TermKind kind) {
  switch (kind) {
    case TermKind::kNone:
      return "none";
    case TermKind::kLinear:
      return "linear";
    case TermKind::kSpline:
      return "spline";
  }
  return "none";
}

TermKind kind_from_name(const std::string& name) {
  if (name == "none") return TermKind::kNone;
  if (name == "linear") return TermKind::kLinear;
  if (name == "spline") return TermKind::kSpline;
  throw DataError("unknown term kind '" + name + "'");
}

nlohmann::json vector_to_json(const Eigen::VectorXd& v) {
  nlohmann::json j = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) j.push_back(v(i));
  return j;
}

Eigen::VectorXd vector_from_json(const nlohmann::json& j) {
  Eigen::VectorXd v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  return v;
}

nlohmann::json matrix_to_json(const Eigen::MatrixXd& m) {
  nlohmann::json j = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    j.push_back(std::move(row));
  }
  return j;
}

Eigen::MatrixXd matrix_from_json(const nlohmann::json& j) {
  const Eigen::Index rows = static_cast<Eigen::Index>(j.size());
  const Eigen::Index cols = rows > 0 ? static_cast<Eigen::Index>(j[0].size()) : 0;
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      m(r, c) = j[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)].get<double>();
    }
  }
  return m;
}

nlohmann::json term_to_json(const TermSpec& term) {
  nlohmann::json j;
  j["kind"] = kind_name(term.kind);
  j["n_splines"] = term.n_splines ? nlohmann::json(*term.n_splines) : nlohmann::json();
  j["lambda"] = term.lambda ? nlohmann::json(*term.lambda) : nlohmann::json();
  j["scale"] = term.scale;
  return j;
}

TermSpec term_from_json(const nlohmann::json& j) {
  TermSpec term;
  term.kind = kind_from_name(j.at("kind").get<std::string>());
  if (!j.at("n_splines").is_null()) term.n_splines = j.at("n_splines").get<int>();
  if (!j.at("lambda").is_null()) term.lambda = j.at("lambda").get<double>();
  term.scale = j.at("scale").get<bool>();
  return term;
}

nlohmann::json objectives_to_json(const Objectives& o) {
  return {{"rmse", o.rmse}, {"penalty", o.penalty}, {"valid", o.valid}};
}

Objectives objectives_from_json(const nlohmann::json& j) {
  return {j.at("rmse").get<double>(), j.at("penalty").get<double>(),
          j.at("valid").get<bool>()};
}

}  // namespace

nlohmann::json chromosome_to_json(const Chromosome& c) {
  nlohmann::json j = nlohmann::json::array();
  for (const Gene& gene : c.genes) j.push_back(term_to_json(gene));
  return j;
}

Chromosome chromosome_from_json(const nlohmann::json& j) {
  Chromosome c;
  for (const auto& item : j) c.genes.push_back(term_from_json(item));
  return c;
}

nlohmann::json model_to_json(const FittedGam& model, bool include_covariance) {
  nlohmann::json j;
  nlohmann::json spec = nlohmann::json::array();
  for (const TermSpec& term : model.spec.terms) spec.push_back(term_to_json(term));
  j["spec"] = std::move(spec);
  j["beta"] = vector_to_json(model.beta);
  j["sigma2"] = model.sigma2;
  j["edf"] = model.edf;
  j["n_train"] = model.n_train;
  j["train_target_range"] = model.train_target_range;
  j["feature_min"] = vector_to_json(model.feature_min);
  j["feature_max"] = vector_to_json(model.feature_max);

  nlohmann::json blocks = nlohmann::json::array();
  for (const TermBlock& b : model.blocks) {
    blocks.push_back({{"start", b.start}, {"count", b.count}});
  }
  j["blocks"] = std::move(blocks);

  nlohmann::json scaler;
  scaler["mean"] = model.scaler.mean;
  scaler["stddev"] = model.scaler.stddev;
  scaler["scaled"] = std::vector<int>(model.scaler.scaled.begin(),
                                      model.scaler.scaled.end());
  j["scalers"] = std::move(scaler);

  nlohmann::json bases = nlohmann::json::array();
  for (const auto& basis : model.bases) {
    if (!basis) {
      bases.push_back(nullptr);
    } else {
      bases.push_back({{"degree", basis->degree},
                       {"n_basis", basis->n_basis},
                       {"knots", vector_to_json(basis->knots)},
                       {"domain_lo", basis->domain_lo},
                       {"domain_hi", basis->domain_hi}});
    }
  }
  j["knots"] = std::move(bases);

  if (include_covariance) j["covariance"] = matrix_to_json(model.covariance);
  return j;
}

FittedGam model_from_json(const nlohmann::json& j) {
  FittedGam model;
  for (const auto& item : j.at("spec")) model.spec.terms.push_back(term_from_json(item));
  model.beta = vector_from_json(j.at("beta"));
  model.sigma2 = j.at("sigma2").get<double>();
  model.edf = j.at("edf").get<double>();
  model.n_train = j.at("n_train").get<int>();
  model.train_target_range = j.at("train_target_range").get<double>();
  model.feature_min = vector_from_json(j.at("feature_min"));
  model.feature_max = vector_from_json(j.at("feature_max"));

  for (const auto& item : j.at("blocks")) {
    model.blocks.push_back({item.at("start").get<int>(), item.at("count").get<int>()});
  }

  const auto& scaler = j.at("scalers");
  model.scaler.mean = scaler.at("mean").get<std::vector<double>>();
  model.scaler.stddev = scaler.at("stddev").get<std::vector<double>>();
  for (const auto& flag : scaler.at("scaled")) {
    model.scaler.scaled.push_back(flag.get<int>() != 0);
  }

  for (const auto& item : j.at("knots")) {
    if (item.is_null()) {
      model.bases.emplace_back();
    } else {
      SplineBasis basis;
      basis.degree = item.at("degree").get<int>();
      basis.n_basis = item.at("n_basis").get<int>();
      basis.knots = vector_from_json(item.at("knots"));
      basis.domain_lo = item.at("domain_lo").get<double>();
      basis.domain_hi = item.at("domain_hi").get<double>();
      model.bases.emplace_back(std::move(basis));
    }
  }

  if (j.contains("covariance")) {
    model.covariance = matrix_from_json(j.at("covariance"));
  } else {
    // No covariance on reload: CI queries will hit the invalid sentinel.
    model.covariance = Eigen::MatrixXd::Constant(
        model.beta.size(), model.beta.size(),
        std::numeric_limits<double>::quiet_NaN());
  }
  return model;
}

nlohmann::json run_record_to_json(const RunRecord& record) {
  nlohmann::json j;
  j["seed"] = record.seed;
  j["config"] = {{"population_size", record.population_size},
                 {"generations", record.generations},
                 {"crossover_prob", record.crossover_prob},
                 {"k_folds", record.k_folds},
                 {"test_fraction", record.test_fraction},
                 {"target_column", record.target_column}};
  j["representatives"] = {
      {"knee",
       {{"objectives", objectives_to_json(record.knee)},
        {"test_rmse", record.knee_test_rmse},
        {"chromosome", chromosome_to_json(record.knee_chromosome)}}},
      {"best_by_rmse",
       {{"objectives", objectives_to_json(record.best_by_rmse)},
        {"test_rmse", record.best_by_rmse_test_rmse},
        {"chromosome", chromosome_to_json(record.best_by_rmse_chromosome)}}},
      {"best_by_penalty",
       {{"objectives", objectives_to_json(record.best_by_penalty)},
        {"test_rmse", record.best_by_penalty_test_rmse},
        {"chromosome", chromosome_to_json(record.best_by_penalty_chromosome)}}}};
  j["baselines"] = {{"cart_test_rmse", record.cart_test_rmse},
                    {"gam_test_rmse", record.baseline_gam_test_rmse},
                    {"gam_penalty", record.baseline_gam_penalty}};
  nlohmann::json front = nlohmann::json::array();
  for (const FrontPoint& p : record.front) {
    front.push_back({{"rmse", p.rmse}, {"penalty", p.penalty}, {"key", p.key}});
  }
  j["front"] = std::move(front);
  return j;
}

RunRecord run_record_from_json(const nlohmann::json& j) {
  RunRecord record;
  record.seed = j.at("seed").get<std::uint64_t>();
  const auto& config = j.at("config");
  record.population_size = config.at("population_size").get<int>();
  record.generations = config.at("generations").get<int>();
  record.crossover_prob = config.at("crossover_prob").get<double>();
  record.k_folds = config.at("k_folds").get<int>();
  record.test_fraction = config.at("test_fraction").get<double>();
  record.target_column = config.at("target_column").get<std::string>();

  const auto& reps = j.at("representatives");
  record.knee = objectives_from_json(reps.at("knee").at("objectives"));
  record.knee_test_rmse = reps.at("knee").at("test_rmse").get<double>();
  record.knee_chromosome = chromosome_from_json(reps.at("knee").at("chromosome"));
  record.best_by_rmse = objectives_from_json(reps.at("best_by_rmse").at("objectives"));
  record.best_by_rmse_test_rmse = reps.at("best_by_rmse").at("test_rmse").get<double>();
  record.best_by_rmse_chromosome =
      chromosome_from_json(reps.at("best_by_rmse").at("chromosome"));
  record.best_by_penalty =
      objectives_from_json(reps.at("best_by_penalty").at("objectives"));
  record.best_by_penalty_test_rmse =
      reps.at("best_by_penalty").at("test_rmse").get<double>();
  record.best_by_penalty_chromosome =
      chromosome_from_json(reps.at("best_by_penalty").at("chromosome"));

  const auto& baselines = j.at("baselines");
  record.cart_test_rmse = baselines.at("cart_test_rmse").get<double>();
  record.baseline_gam_test_rmse = baselines.at("gam_test_rmse").get<double>();
  record.baseline_gam_penalty = baselines.at("gam_penalty").get<double>();

  for (const auto& item : j.at("front")) {
    record.front.push_back({item.at("rmse").get<double>(),
                            item.at("penalty").get<double>(),
                            item.at("key").get<std::string>()});
  }
  return record;
}

void write_json_file(const nlohmann::json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path + "'");
  out << j.dump(2) << '\n';
}

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError("invalid JSON in '" + path + "': " + e.what());
  }
}

}  // namespace gaggam
