#pragma once

#include <span>
#include <vector>

namespace perception {

// Probability that a random positive outranks a random negative, ties
// counted one half, computed from average ranks. Throws UndefinedMetric when
// either class is absent and InvalidInput on length mismatch or non-binary
// labels.
double roc_auc(std::span<const double> scores, std::span<const int> labels);

struct Prf1 {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  // Set when a zero denominator forced one of the values to 0.
  bool degenerate = false;
};

Prf1 prf1(std::span<const int> decisions, std::span<const int> labels);

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation; 0 for a single value
};

MeanStd mean_std(std::span<const double> values);

}  // namespace perception
