#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "../oracles.hpp"
#include "perception/error.hpp"
#include "perception/multivariate.hpp"

using namespace perception;

namespace {

Matrix make(std::size_t rows, std::size_t cols, std::vector<double> v) {
  return Matrix(rows, cols, std::move(v));
}

std::vector<std::size_t> iota_rows(std::size_t n) {
  std::vector<std::size_t> r(n);
  std::iota(r.begin(), r.end(), std::size_t{0});
  return r;
}

}  // namespace

TEST_CASE("featurewise_median") {
  const Matrix m = make(3, 2, {0, 0, 1, 1, 2, 1});
  CHECK(featurewise_median(m).medians == std::vector<double>{1, 1});
  CHECK(featurewise_median(make(1, 2, {7, 3})).medians == std::vector<double>{7, 3});
  CHECK(featurewise_median(make(3, 2, {4, 1, 4, 2, 4, 3})).medians[0] == 4);
  // Even counts average the two central values.
  CHECK(featurewise_median(make(4, 1, {1, 2, 4, 10})).medians[0] == 3);
  CHECK_THROWS_AS(featurewise_median(Matrix(0, 2)), InvalidInput);

  std::mt19937_64 gen(2);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t rows = 1 + gen() % 30;
    Matrix r(rows, 3);
    for (std::size_t i = 0; i < rows; ++i) {
      for (std::size_t j = 0; j < 3; ++j) r(i, j) = static_cast<double>(gen() % 1000) / 7.0;
    }
    const auto c = featurewise_median(r);
    for (std::size_t j = 0; j < 3; ++j) CHECK(c.medians[j] == oracle::sorted_median(r.column_values(j)));
  }
}

TEST_CASE("deviation_reduce gives Euclidean distances to the centre") {
  const Matrix m = make(3, 2, {0, 0, 1, 1, 2, 1});
  const auto d = deviation_reduce(m, featurewise_median(m));
  REQUIRE(d.size() == 3);
  CHECK(d[0] == doctest::Approx(std::sqrt(2.0)));
  CHECK(d[1] == 0.0);
  CHECK(d[2] == 1.0);

  const Matrix same = make(3, 2, {5, 5, 5, 5, 5, 5});
  for (double x : deviation_reduce(same, featurewise_median(same))) CHECK(x == 0.0);

  CHECK_THROWS_AS(deviation_reduce(m, FeatureCenter{{1, 1, 1}, {}}), InvalidInput);
}

TEST_CASE("featurewise_mad replaces zero spreads with one") {
  const Matrix m = make(4, 2, {1, 3, 2, 3, 3, 3, 10, 3});
  const auto rows = iota_rows(4);
  const auto c = featurewise_median(m, rows);
  const auto s = featurewise_mad(m, rows, c.medians);
  // Column 0: median 2.5, |dev| = 1.5, 0.5, 0.5, 7.5 -> MAD 1.
  CHECK(s[0] == 1.0);
  CHECK(s[1] == 1.0);
  const Matrix wide = make(3, 1, {0, 10, 30});
  CHECK(featurewise_mad(wide, iota_rows(3), std::vector<double>{10})[0] == 10.0);
}

TEST_CASE("single feature detectors see raw values") {
  std::mt19937_64 gen(8);
  std::vector<double> v(200);
  for (auto& x : v) x = static_cast<double>(static_cast<int>(gen() % 1000)) / 10.0;
  v.push_back(500.0);
  const Matrix m = Matrix::column(v);
  const Detector det = fit_detector(m);
  CHECK(det.univariate());
  const NeuronModel direct = fit(integerize(v, infer_decimals(v)));
  CHECK(det.neuron == direct);
  for (std::size_t i = 0; i < v.size(); ++i) {
    REQUIRE(det.score(m.row(i)) == score(direct, v[i]));
  }
  CHECK(det.decide(m.row(v.size() - 1)) == Decision::kAnomaly);
}

TEST_CASE("a far observation is flagged in several dimensions") {
  std::mt19937_64 gen(4);
  std::normal_distribution<double> z;
  Matrix m(300, 4);
  for (std::size_t i = 0; i < 300; ++i) {
    for (std::size_t j = 0; j < 4; ++j) m(i, j) = std::round(z(gen) * 100) / 100;
  }
  for (std::size_t j = 0; j < 4; ++j) m(299, j) = 25.0;
  const Detector det = fit_detector(m);
  CHECK_FALSE(det.univariate());
  CHECK(det.decide(m.row(299)) == Decision::kAnomaly);
  std::size_t flagged = 0;
  for (std::size_t i = 0; i < 299; ++i) flagged += det.decide(m.row(i)) == Decision::kAnomaly;
  CHECK(flagged < 15);
}

TEST_CASE("decisions are invariant to translating all observations") {
  std::mt19937_64 gen(9);
  for (int trial = 0; trial < 20; ++trial) {
    Matrix m(60, 3);
    for (std::size_t i = 0; i < 60; ++i) {
      for (std::size_t j = 0; j < 3; ++j) {
        m(i, j) = static_cast<double>(static_cast<int>(gen() % 200) - 100) / 4.0;
      }
    }
    Matrix shifted = m;
    const double shift[3] = {12.5, -3.0, 1000.25};
    for (std::size_t i = 0; i < 60; ++i) {
      for (std::size_t j = 0; j < 3; ++j) shifted(i, j) += shift[j];
    }
    const Detector a = fit_detector(m);
    const Detector b = fit_detector(shifted);
    CHECK(a.neuron == b.neuron);
    for (std::size_t i = 0; i < 60; ++i) {
      REQUIRE(a.reduce(m.row(i)) == doctest::Approx(b.reduce(shifted.row(i))).epsilon(1e-12));
      REQUIRE(a.decide(m.row(i)) == b.decide(shifted.row(i)));
    }
  }
}

TEST_CASE("distances are nonnegative and the fit covers every training input") {
  std::mt19937_64 gen(10);
  Matrix m(80, 5);
  for (std::size_t i = 0; i < 80; ++i) {
    for (std::size_t j = 0; j < 5; ++j) m(i, j) = static_cast<double>(gen() % 50);
  }
  const Detector det = fit_detector(m, {0, false});
  for (std::size_t i = 0; i < 80; ++i) {
    const double r = det.reduce(m.row(i));
    CHECK(r >= 0.0);
    CHECK(deviation(det.neuron, r) <= det.neuron.total_deviation);
  }
}

TEST_CASE("a detector fitted on a row subset uses only those rows") {
  const Matrix m = make(5, 2, {0, 0, 1, 1, 2, 2, 100, 100, 101, 101});
  const std::vector<std::size_t> rows{3, 4, 3};
  const Detector det = fit_detector(m, rows, 0, false);
  CHECK(det.center.medians == std::vector<double>{100, 100});
  const std::vector<std::size_t> none;
  CHECK_THROWS_AS(fit_detector(m, none, 0, false), InvalidInput);
}

TEST_CASE("standardized detectors divide by the spread") {
  const Matrix m = make(5, 2, {0, 0, 1, 100, 2, 200, 3, 300, 4, 400});
  const Detector plain = fit_detector(m, {2, false});
  const Detector std_det = fit_detector(m, {2, true});
  CHECK_FALSE(plain.center.standardized());
  REQUIRE(std_det.center.standardized());
  CHECK(std_det.center.spreads == std::vector<double>{1, 100});
  CHECK(std_det.reduce(m.row(0)) == doctest::Approx(std::sqrt(8.0)));
}

TEST_CASE("resolve_decimals") {
  CHECK(resolve_decimals(Matrix::column(std::vector<double>{1.5, 2}), {}) == 1);
  CHECK(resolve_decimals(Matrix::column(std::vector<double>{1.5, 2}), {4, false}) == 4);
  CHECK_THROWS_AS(resolve_decimals(Matrix::column(std::vector<double>{1}), {7, false}), InvalidInput);
  // Distances 0 and 5 to the centre (3, 4) of a 3-4-5 layout are integral.
  CHECK(resolve_decimals(make(3, 2, {0, 0, 3, 4, 6, 8}), {}) == 0);
}

TEST_CASE("reduce rejects mismatched dimensions") {
  const Detector uni = fit_detector(Matrix::column(std::vector<double>{1, 2, 3}));
  CHECK_THROWS_AS(uni.reduce(std::vector<double>{1, 2}), InvalidInput);
  const Detector multi = fit_detector(make(2, 2, {1, 2, 3, 4}));
  CHECK_THROWS_AS(multi.reduce(std::vector<double>{1}), InvalidInput);
}
