#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "gaggam/dataset.hpp"
#include "gaggam/errors.hpp"
#include "support/test_support.hpp"

using namespace gaggam;

namespace {

std::string write_text(const std::string& name, const std::string& content) {
  const std::string path = (std::filesystem::temp_directory_path() / name).string();
  std::ofstream out(path);
  out << content;
  return path;
}

}  // namespace

TEST_CASE("load_csv parses the California Housing shape contract") {
  // 8 features + target, with enough rows for the n_rows >= n_features + 2
  // invariant.
  std::string csv = "MedInc,HouseAge,AveRooms,AveBedrms,Population,AveOccup,"
                    "Latitude,Longitude,MedHouseVal\n";
  for (int r = 0; r < 12; ++r) {
    for (int c = 0; c < 8; ++c) csv += std::to_string(0.5 + 0.1 * r + 0.01 * c) + ",";
    csv += std::to_string(1.0 + 0.2 * r) + "\n";
  }
  const std::string path = write_text("gaggam_ca_shape.csv", csv);

  const Dataset data = load_csv(path, "MedHouseVal");
  CHECK(data.n_rows() == 12);
  CHECK(data.n_features() == 8);
  const std::vector<std::string> expected = {"MedInc",     "HouseAge", "AveRooms",
                                             "AveBedrms",  "Population",
                                             "AveOccup",   "Latitude", "Longitude"};
  CHECK(data.feature_names == expected);
  CHECK(data.target(0) == doctest::Approx(1.0));
  CHECK(data.features(1, 0) == doctest::Approx(0.6));
}

TEST_CASE("load_csv minimal well-formed input") {
  const std::string path = write_text("gaggam_toy3x2.csv",
                                      "a,b,y\n1,2,3\n4,5,6\n7,8,9\n10,11,12\n");
  const Dataset data = load_csv(path, "y");
  CHECK(data.n_rows() == 4);
  CHECK(data.n_features() == 2);
  CHECK(data.features(2, 1) == 8.0);
  CHECK(data.target(3) == 12.0);
}

TEST_CASE("load_csv error paths") {
  SUBCASE("missing file") {
    CHECK_THROWS_AS(load_csv("/nonexistent/nope.csv", "y"), DataError);
  }
  SUBCASE("NA cell reports row and column") {
    const std::string path =
        write_text("gaggam_na.csv", "a,b,y\n1,2,3\n4,NA,6\n7,8,9\n10,11,12\n");
    try {
      load_csv(path, "y");
      FAIL("expected DataError");
    } catch (const DataError& e) {
      const std::string msg = e.what();
      CHECK(msg.find("row 2") != std::string::npos);
      CHECK(msg.find("'b'") != std::string::npos);
    }
  }
  SUBCASE("missing target column") {
    const std::string path = write_text("gaggam_notgt.csv", "a,b,c\n1,2,3\n");
    CHECK_THROWS_AS(load_csv(path, "y"), DataError);
  }
  SUBCASE("non-finite value rejected") {
    const std::string path =
        write_text("gaggam_inf.csv", "a,b,y\n1,2,3\n4,inf,6\n7,8,9\n10,11,12\n");
    CHECK_THROWS_AS(load_csv(path, "y"), DataError);
  }
  SUBCASE("too few rows for the feature count") {
    const std::string path = write_text("gaggam_short.csv", "a,b,y\n1,2,3\n4,5,6\n");
    CHECK_THROWS_AS(load_csv(path, "y"), DataError);
  }
}

TEST_CASE("make_split counts and determinism") {
  const Split s = make_split(10, 0.2, 42);
  CHECK(s.test_indices.size() == 2);
  CHECK(s.train_val_indices.size() == 8);

  std::vector<bool> seen(10, false);
  for (int i : s.test_indices) seen[static_cast<std::size_t>(i)] = true;
  for (int i : s.train_val_indices) {
    CHECK_FALSE(seen[static_cast<std::size_t>(i)]);  // disjoint
    seen[static_cast<std::size_t>(i)] = true;
  }
  CHECK(std::count(seen.begin(), seen.end(), true) == 10);  // covers all rows

  const Split again = make_split(10, 0.2, 42);
  CHECK(again.test_indices == s.test_indices);
  CHECK(again.train_val_indices == s.train_val_indices);

  const Split other_seed = make_split(10, 0.2, 43);
  CHECK(other_seed.test_indices != s.test_indices);
}

TEST_CASE("make_split at dataset scale: round(0.2 * 20640)") {
  const Split s = make_split(20640, 0.2, 7);
  CHECK(s.train_val_indices.size() == 16512);
  CHECK(s.test_indices.size() == 4128);
}

TEST_CASE("make_split rejects degenerate partitions") {
  CHECK_THROWS_AS(make_split(10, 0.01, 1), DataError);  // rounds to 0 test rows
  CHECK_THROWS_AS(make_split(10, 0.99, 1), DataError);
  CHECK_THROWS_AS(make_split(10, 0.0, 1), DataError);
  CHECK_THROWS_AS(make_split(10, 1.0, 1), DataError);
}

TEST_CASE("fit_scaler population-stddev convention") {
  Eigen::MatrixXd m(3, 1);
  m << 1.0, 2.0, 3.0;
  const ScalerState state = fit_scaler(m, {0});
  const Eigen::MatrixXd scaled = apply_scaler(state, m);
  // population stddev of {1,2,3} is sqrt(2/3)
  CHECK(scaled(0, 0) == doctest::Approx(-1.2247448714).epsilon(1e-9));
  CHECK(scaled(1, 0) == doctest::Approx(0.0));
  CHECK(scaled(2, 0) == doctest::Approx(1.2247448714).epsilon(1e-9));
}

TEST_CASE("apply_scaler idempotent on standardized data") {
  Eigen::MatrixXd m(4, 1);
  m << -1.0, 1.0, -1.0, 1.0;  // mean 0, population stddev 1 already
  const ScalerState state = fit_scaler(m, {0});
  const Eigen::MatrixXd scaled = apply_scaler(state, m);
  CHECK((scaled - m).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("unscaled columns pass through bit-identical") {
  gaggam::Rng rng(9);
  Eigen::MatrixXd m(20, 3);
  for (int r = 0; r < 20; ++r) {
    for (int c = 0; c < 3; ++c) m(r, c) = rng.uniform(-5, 5);
  }
  const ScalerState state = fit_scaler(m, {1});
  const Eigen::MatrixXd scaled = apply_scaler(state, m);
  CHECK(scaled.col(0) == m.col(0));
  CHECK(scaled.col(2) == m.col(2));
  CHECK(scaled.col(1) != m.col(1));
}

TEST_CASE("fit_scaler rejects zero-variance columns") {
  Eigen::MatrixXd m(5, 2);
  m.col(0).setConstant(3.0);
  m.col(1).setLinSpaced(5, 0.0, 1.0);
  CHECK_THROWS_AS(fit_scaler(m, {0}), DataError);
  CHECK_NOTHROW(fit_scaler(m, {1}));
}

TEST_CASE("scaler state depends only on the fitting rows") {
  gaggam::Rng rng(11);
  Eigen::MatrixXd train(30, 2);
  for (int r = 0; r < 30; ++r) {
    train(r, 0) = rng.uniform();
    train(r, 1) = rng.normal(2.0, 3.0);
  }
  const ScalerState before = fit_scaler(train, {0, 1});

  // Mutating rows outside the fitting set must not matter: refit on the
  // same rows after constructing a larger matrix with garbage appended.
  Eigen::MatrixXd extended(40, 2);
  extended.topRows(30) = train;
  extended.bottomRows(10).setConstant(1e9);
  const ScalerState after = fit_scaler(extended.topRows(30), {0, 1});
  CHECK(before.mean == after.mean);
  CHECK(before.stddev == after.stddev);
}

TEST_CASE("apply_scaler / invert_scaler round-trip") {
  gaggam::Rng rng(13);
  Eigen::MatrixXd m(50, 3);
  for (int r = 0; r < 50; ++r) {
    m(r, 0) = rng.uniform(-100, 100);
    m(r, 1) = rng.normal(0, 1e-3);
    m(r, 2) = rng.uniform(1e4, 1e6);
  }
  const ScalerState state = fit_scaler(m, {0, 1, 2});
  const Eigen::MatrixXd round_trip = invert_scaler(state, apply_scaler(state, m));
  CHECK((round_trip - m).cwiseAbs().maxCoeff() < 1e-10 * m.cwiseAbs().maxCoeff());

  const Eigen::MatrixXd other_way = apply_scaler(state, invert_scaler(state, m));
  CHECK((other_way - m).cwiseAbs().maxCoeff() <
        1e-10 * std::max(1.0, m.cwiseAbs().maxCoeff()));
}

TEST_CASE("select_rows materializes the requested view") {
  const Dataset data = testsupport::make_linear_dataset(10, {1.0, 2.0}, 0.0, 5);
  const std::vector<int> rows = {7, 2, 9};
  const Dataset sub = select_rows(data, rows);
  CHECK(sub.n_rows() == 3);
  CHECK(sub.features.row(0) == data.features.row(7));
  CHECK(sub.target(2) == data.target(9));
  CHECK(sub.feature_names == data.feature_names);
}

TEST_CASE("save_csv / load_csv round-trip") {
  const Dataset data = testsupport::make_linear_dataset(12, {0.5, -1.5}, 0.1, 77);
  const std::string path = testsupport::write_temp_csv(data, "gaggam_roundtrip.csv", "y");
  const Dataset back = load_csv(path, "y");
  CHECK(back.n_rows() == data.n_rows());
  CHECK((back.features - data.features).cwiseAbs().maxCoeff() == 0.0);
  CHECK((back.target - data.target).cwiseAbs().maxCoeff() == 0.0);
}
