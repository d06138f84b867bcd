#ifndef GAGGAM_SERIALIZATION_HPP_
#define GAGGAM_SERIALIZATION_HPP_

#include <nlohmann/json.hpp>
#include <string>

#include "gaggam/gam.hpp"
#include "gaggam/genome.hpp"
#include "gaggam/report.hpp"

namespace gaggam {

// Chromosome <-> [{"kind", "n_splines", "lambda", "scale"}, ...]
nlohmann::json chromosome_to_json(const Chromosome& c);
Chromosome chromosome_from_json(const nlohmann::json& j);

// FittedGam <-> {"spec", "beta", "knots", "scalers", "sigma2", ...};
// the covariance matrix is included only on request.
nlohmann::json model_to_json(const FittedGam& model, bool include_covariance = false);
FittedGam model_from_json(const nlohmann::json& j);

nlohmann::json run_record_to_json(const RunRecord& record);
RunRecord run_record_from_json(const nlohmann::json& j);

void write_json_file(const nlohmann::json& j, const std::string& path);
nlohmann::json read_json_file(const std::string& path);

}  // namespace gaggam

#endif  // GAGGAM_SERIALIZATION_HPP_
