#pragma once

// Reduction of multivariate observations to one nonnegative magnitude each,
// so the univariate neuron applies: the Euclidean distance of the
// observation to the component-wise median of the data the neuron learns
// from. Univariate data is never reduced; the neuron sees the raw values.

#include <cstddef>
#include <span>
#include <vector>

#include "perception/matrix.hpp"
#include "perception/neuron.hpp"

namespace perception {

// Component-wise centre of a set of observations, optionally with a per
// feature spread that deviations are divided by.
struct FeatureCenter {
  std::vector<double> medians;
  std::vector<double> spreads;  // empty: no standardization

  bool standardized() const { return !spreads.empty(); }
  friend bool operator==(const FeatureCenter&, const FeatureCenter&) = default;
};

// Real median of one feature over the selected rows; for even counts the
// mean of the two central values.
double feature_median(const Matrix& data, std::size_t feature,
                      std::span<const std::size_t> rows);

FeatureCenter featurewise_median(const Matrix& data);
FeatureCenter featurewise_median(const Matrix& data, std::span<const std::size_t> rows);

// Median absolute deviation of each feature around `center`. Zero spreads
// become 1 so constant features contribute nothing rather than dividing by 0.
std::vector<double> featurewise_mad(const Matrix& data, std::span<const std::size_t> rows,
                                    std::span<const double> medians);

double distance_to_center(std::span<const double> row, const FeatureCenter& center);

// One distance per row of `data`.
std::vector<double> deviation_reduce(const Matrix& data, const FeatureCenter& center);

// A neuron together with the reduction that turns an observation into its
// input value. For univariate data `center` is empty and the value is the
// observation itself.
struct Detector {
  FeatureCenter center;
  NeuronModel neuron;

  bool univariate() const { return center.medians.empty(); }
  double reduce(std::span<const double> row) const;
  double score(std::span<const double> row) const;
  Decision decide(std::span<const double> row) const { return decide_score(score(row)); }

  friend bool operator==(const Detector&, const Detector&) = default;
};

struct DetectorOptions {
  int decimals = -1;  // -1: infer from the data
  bool standardize = false;
};

// The scale the neuron input is integerized at: inferred from the raw
// column for F == 1, from the distances to the global median for F > 1.
int resolve_decimals(const Matrix& data, const DetectorOptions& options);

// Fits a detector on the given rows (duplicates allowed) at a fixed scale.
Detector fit_detector(const Matrix& data, std::span<const std::size_t> rows, int decimals,
                      bool standardize);

// Single neuron over all rows of `data`.
Detector fit_detector(const Matrix& data, const DetectorOptions& options = {});

}  // namespace perception
