#include "gaggam/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "gaggam/errors.hpp"
#include "gaggam/rng.hpp"

namespace gaggam {

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

double parse_cell(const std::string& cell, int row, const std::string& column) {
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  while (begin < end && (*begin == ' ' || *begin == '\t')) ++begin;
  while (end > begin && (end[-1] == ' ' || end[-1] == '\t')) --end;
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end) {
    throw DataError("non-numeric cell '" + cell + "' at data row " +
                    std::to_string(row) + ", column '" + column + "'");
  }
  if (!std::isfinite(value)) {
    throw DataError("non-finite value at data row " + std::to_string(row) +
                    ", column '" + column + "'");
  }
  return value;
}

}  // namespace

Dataset load_csv(const std::string& path, const std::string& target_column) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");

  std::string line;
  if (!std::getline(in, line)) throw DataError("empty file '" + path + "'");
  if (!line.empty() && line.back() == '\r') line.pop_back();

  const std::vector<std::string> header = split_line(line);
  int target_col = -1;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == target_column) {
      target_col = static_cast<int>(i);
      break;
    }
  }
  if (target_col < 0) {
    throw DataError("target column '" + target_column + "' not in header of '" +
                    path + "'");
  }

  const int n_cols = static_cast<int>(header.size());
  const int n_features = n_cols - 1;
  if (n_features < 1) throw DataError("no feature columns in '" + path + "'");

  std::vector<double> flat;
  std::vector<double> target;
  int row = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> cells = split_line(line);
    if (static_cast<int>(cells.size()) != n_cols) {
      throw DataError("row " + std::to_string(row + 1) + " has " +
                      std::to_string(cells.size()) + " cells, expected " +
                      std::to_string(n_cols));
    }
    for (int c = 0; c < n_cols; ++c) {
      const double v = parse_cell(cells[c], row + 1, header[c]);
      if (c == target_col) {
        target.push_back(v);
      } else {
        flat.push_back(v);
      }
    }
    ++row;
  }

  if (row < n_features + 2) {
    throw DataError("need at least " + std::to_string(n_features + 2) +
                    " rows for " + std::to_string(n_features) +
                    " features, got " + std::to_string(row));
  }

  Dataset data;
  data.features.resize(row, n_features);
  for (int r = 0; r < row; ++r) {
    for (int c = 0; c < n_features; ++c) {
      data.features(r, c) = flat[static_cast<std::size_t>(r) * n_features + c];
    }
  }
  data.target = Eigen::Map<Eigen::VectorXd>(target.data(), row);
  for (int c = 0; c < n_cols; ++c) {
    if (c != target_col) data.feature_names.push_back(header[c]);
  }
  return data;
}

void save_csv(const Dataset& data, const std::string& target_column,
              const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path + "'");
  for (const auto& name : data.feature_names) out << name << ',';
  out << target_column << '\n';
  char buf[64];
  for (int r = 0; r < data.n_rows(); ++r) {
    for (int c = 0; c < data.n_features(); ++c) {
      std::snprintf(buf, sizeof(buf), "%.17g", data.features(r, c));
      out << buf << ',';
    }
    std::snprintf(buf, sizeof(buf), "%.17g", data.target(r));
    out << buf << '\n';
  }
}

Split make_split(int n_rows, double test_fraction, std::uint64_t seed) {
  if (test_fraction <= 0.0 || test_fraction >= 1.0) {
    throw DataError("test_fraction must lie in (0, 1)");
  }
  const int n_test = static_cast<int>(std::lround(test_fraction * n_rows));
  if (n_test < 1 || n_test >= n_rows) {
    throw DataError("degenerate split: " + std::to_string(n_test) + " test rows of " +
                    std::to_string(n_rows));
  }

  std::vector<int> order(static_cast<std::size_t>(n_rows));
  for (int i = 0; i < n_rows; ++i) order[static_cast<std::size_t>(i)] = i;
  Rng rng = Rng::stream(seed, /*id=*/0x5B117ULL);
  rng.shuffle(order);

  Split split;
  split.seed = seed;
  split.test_indices.assign(order.begin(), order.begin() + n_test);
  split.train_val_indices.assign(order.begin() + n_test, order.end());
  std::sort(split.test_indices.begin(), split.test_indices.end());
  std::sort(split.train_val_indices.begin(), split.train_val_indices.end());
  return split;
}

ScalerState fit_scaler(const Eigen::MatrixXd& features,
                       const std::vector<int>& columns) {
  const int n_features = static_cast<int>(features.cols());
  const int n_rows = static_cast<int>(features.rows());
  if (n_rows < 1) throw DataError("fit_scaler needs at least one row");

  ScalerState state;
  state.mean.assign(static_cast<std::size_t>(n_features), 0.0);
  state.stddev.assign(static_cast<std::size_t>(n_features), 1.0);
  state.scaled.assign(static_cast<std::size_t>(n_features), false);

  for (const int c : columns) {
    if (c < 0 || c >= n_features) {
      throw DataError("scaler column " + std::to_string(c) + " out of range");
    }
    const double mean = features.col(c).mean();
    const double var =
        (features.col(c).array() - mean).square().sum() / n_rows;  // population
    const double sd = std::sqrt(var);
    if (!(sd > 0.0) || !std::isfinite(sd)) {
      throw DataError("zero-variance column " + std::to_string(c) +
                      " cannot be scaled");
    }
    state.mean[static_cast<std::size_t>(c)] = mean;
    state.stddev[static_cast<std::size_t>(c)] = sd;
    state.scaled[static_cast<std::size_t>(c)] = true;
  }
  return state;
}

Eigen::MatrixXd apply_scaler(const ScalerState& state,
                             const Eigen::MatrixXd& features) {
  if (static_cast<int>(features.cols()) != state.n_features()) {
    throw DataError("scaler/feature width mismatch");
  }
  Eigen::MatrixXd out = features;
  for (int c = 0; c < state.n_features(); ++c) {
    if (state.scaled[static_cast<std::size_t>(c)]) {
      out.col(c) = (features.col(c).array() - state.mean[static_cast<std::size_t>(c)]) /
                   state.stddev[static_cast<std::size_t>(c)];
    }
  }
  return out;
}

Eigen::MatrixXd invert_scaler(const ScalerState& state,
                              const Eigen::MatrixXd& features) {
  if (static_cast<int>(features.cols()) != state.n_features()) {
    throw DataError("scaler/feature width mismatch");
  }
  Eigen::MatrixXd out = features;
  for (int c = 0; c < state.n_features(); ++c) {
    if (state.scaled[static_cast<std::size_t>(c)]) {
      out.col(c) = features.col(c).array() * state.stddev[static_cast<std::size_t>(c)] +
                   state.mean[static_cast<std::size_t>(c)];
    }
  }
  return out;
}

Dataset select_rows(const Dataset& data, std::span<const int> rows) {
  Dataset out;
  out.feature_names = data.feature_names;
  out.features.resize(static_cast<int>(rows.size()), data.n_features());
  out.target.resize(static_cast<int>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const int r = rows[i];
    out.features.row(static_cast<int>(i)) = data.features.row(r);
    out.target(static_cast<int>(i)) = data.target(r);
  }
  return out;
}

}  // namespace gaggam
