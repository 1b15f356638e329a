#include "perception/multivariate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "perception/error.hpp"

namespace perception {
namespace {

double median_in_place(std::vector<double>& v) {
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + mid, v.end());
  const double upper = v[mid];
  if (v.size() % 2 == 1) return upper;
  const double lower = *std::max_element(v.begin(), v.begin() + mid);
  return 0.5 * (lower + upper);
}

std::vector<std::size_t> all_rows(const Matrix& data) {
  std::vector<std::size_t> rows(data.rows());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  return rows;
}

}  // namespace

double feature_median(const Matrix& data, std::size_t feature,
                      std::span<const std::size_t> rows) {
  if (rows.empty()) throw InvalidInput("median over zero rows");
  if (feature >= data.cols()) throw InvalidInput("feature index out of range");
  std::vector<double> column;
  column.reserve(rows.size());
  for (std::size_t r : rows) column.push_back(data(r, feature));
  return median_in_place(column);
}

FeatureCenter featurewise_median(const Matrix& data) {
  return featurewise_median(data, all_rows(data));
}

FeatureCenter featurewise_median(const Matrix& data, std::span<const std::size_t> rows) {
  if (data.cols() == 0) throw InvalidInput("matrix has no features");
  if (rows.empty()) throw InvalidInput("matrix has no observations");
  FeatureCenter center;
  center.medians.reserve(data.cols());
  for (std::size_t j = 0; j < data.cols(); ++j) {
    center.medians.push_back(feature_median(data, j, rows));
  }
  return center;
}

std::vector<double> featurewise_mad(const Matrix& data, std::span<const std::size_t> rows,
                                    std::span<const double> medians) {
  if (medians.size() != data.cols()) throw InvalidInput("median count != feature count");
  std::vector<double> spreads(data.cols());
  std::vector<double> dev(rows.size());
  for (std::size_t j = 0; j < data.cols(); ++j) {
    for (std::size_t k = 0; k < rows.size(); ++k) {
      dev[k] = std::abs(data(rows[k], j) - medians[j]);
    }
    const double mad = median_in_place(dev);
    spreads[j] = mad > 0.0 ? mad : 1.0;
  }
  return spreads;
}

double distance_to_center(std::span<const double> row, const FeatureCenter& center) {
  if (row.size() != center.medians.size()) {
    throw InvalidInput("observation has " + std::to_string(row.size()) +
                       " features, centre has " + std::to_string(center.medians.size()));
  }
  double acc = 0.0;
  if (center.standardized()) {
    for (std::size_t j = 0; j < row.size(); ++j) {
      const double d = (row[j] - center.medians[j]) / center.spreads[j];
      acc += d * d;
    }
  } else {
    for (std::size_t j = 0; j < row.size(); ++j) {
      const double d = row[j] - center.medians[j];
      acc += d * d;
    }
  }
  return std::sqrt(acc);
}

std::vector<double> deviation_reduce(const Matrix& data, const FeatureCenter& center) {
  if (data.cols() != center.medians.size()) {
    throw InvalidInput("matrix has " + std::to_string(data.cols()) +
                       " features, centre has " + std::to_string(center.medians.size()));
  }
  std::vector<double> out(data.rows());
  for (std::size_t i = 0; i < data.rows(); ++i) out[i] = distance_to_center(data.row(i), center);
  return out;
}

double Detector::reduce(std::span<const double> row) const {
  if (univariate()) {
    if (row.size() != 1) {
      throw InvalidInput("univariate detector given " + std::to_string(row.size()) +
                         " features");
    }
    return row[0];
  }
  return distance_to_center(row, center);
}

double Detector::score(std::span<const double> row) const {
  return perception::score(neuron, reduce(row));
}

int resolve_decimals(const Matrix& data, const DetectorOptions& options) {
  if (options.decimals >= 0) {
    if (options.decimals > kMaxDecimals) throw InvalidInput("decimals must be in [0, 6]");
    return options.decimals;
  }
  if (data.empty()) throw InvalidInput("matrix has no observations");
  if (data.cols() == 1) return infer_decimals(data.data());
  FeatureCenter center = featurewise_median(data);
  if (options.standardize) center.spreads = featurewise_mad(data, all_rows(data), center.medians);
  return infer_decimals(deviation_reduce(data, center));
}

Detector fit_detector(const Matrix& data, std::span<const std::size_t> rows, int decimals,
                      bool standardize) {
  if (rows.empty()) throw InvalidInput("cannot fit a detector on zero rows");
  if (data.cols() == 0) throw InvalidInput("matrix has no features");
  Detector det;
  std::vector<std::int64_t> scaled;
  scaled.reserve(rows.size());
  if (data.cols() == 1) {
    for (std::size_t r : rows) scaled.push_back(scale_to_int(data(r, 0), decimals));
  } else {
    det.center = featurewise_median(data, rows);
    if (standardize) det.center.spreads = featurewise_mad(data, rows, det.center.medians);
    for (std::size_t r : rows) {
      scaled.push_back(scale_to_int(distance_to_center(data.row(r), det.center), decimals));
    }
  }
  det.neuron = fit(scaled, decimals);
  return det;
}

Detector fit_detector(const Matrix& data, const DetectorOptions& options) {
  return fit_detector(data, all_rows(data), resolve_decimals(data, options),
                      options.standardize);
}

}  // namespace perception
