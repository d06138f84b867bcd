#ifndef GAGGAM_DATASET_HPP_
#define GAGGAM_DATASET_HPP_

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace gaggam {

// Immutable regression table: feature matrix, target vector, column names.
struct Dataset {
  Eigen::MatrixXd features;                // n_rows x n_features
  Eigen::VectorXd target;                  // n_rows
  std::vector<std::string> feature_names;  // size n_features

  int n_rows() const { return static_cast<int>(features.rows()); }
  int n_features() const { return static_cast<int>(features.cols()); }
};

// Deterministic train+val / test partition, reproducible from the seed.
struct Split {
  std::vector<int> train_val_indices;
  std::vector<int> test_indices;
  std::uint64_t seed = 0;
};

// Per-feature standardization state.  Columns not listed at fit time pass
// through apply_scaler unchanged.
struct ScalerState {
  std::vector<double> mean;
  std::vector<double> stddev;
  std::vector<bool> scaled;

  int n_features() const { return static_cast<int>(scaled.size()); }
};

// Parses a headered, comma-separated, all-numeric CSV.  The target column
// is removed from the features; remaining columns keep header order.
Dataset load_csv(const std::string& path, const std::string& target_column);

// Writes a dataset back out in the same CSV dialect load_csv reads.
void save_csv(const Dataset& data, const std::string& target_column,
              const std::string& path);

// round(test_fraction * n_rows) rows go to test; the rest to train+val.
// Pure function of its arguments.
Split make_split(int n_rows, double test_fraction, std::uint64_t seed);

// Population (divide by n) mean/stddev of the listed columns, computed on
// the given rows only.  Throws DataError on a zero-variance column.
ScalerState fit_scaler(const Eigen::MatrixXd& features,
                       const std::vector<int>& columns);

Eigen::MatrixXd apply_scaler(const ScalerState& state,
                             const Eigen::MatrixXd& features);

// Inverse transform; apply_scaler(state, invert_scaler(state, x)) == x.
Eigen::MatrixXd invert_scaler(const ScalerState& state,
                              const Eigen::MatrixXd& features);

// Materializes the given rows as a new dataset.
Dataset select_rows(const Dataset& data, std::span<const int> rows);

}  // namespace gaggam

#endif  // GAGGAM_DATASET_HPP_
