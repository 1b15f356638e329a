#include "perception/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "perception/error.hpp"

namespace perception {
namespace {

void check_labels(std::size_t n, std::span<const int> labels) {
  if (n != labels.size()) {
    throw InvalidInput("length mismatch: " + std::to_string(n) + " predictions, " +
                       std::to_string(labels.size()) + " labels");
  }
  for (int y : labels) {
    if (y != 0 && y != 1) throw InvalidInput("labels must be 0 or 1");
  }
}

}  // namespace

double roc_auc(std::span<const double> scores, std::span<const int> labels) {
  check_labels(scores.size(), labels);
  const auto positives = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), 1));
  const std::size_t negatives = labels.size() - positives;
  if (positives == 0 || negatives == 0) {
    throw UndefinedMetric("AUC needs both classes (" + std::to_string(positives) +
                          " positives, " + std::to_string(negatives) + " negatives)");
  }
  for (double s : scores) {
    if (std::isnan(s)) throw InvalidInput("AUC scores must not be NaN");
  }

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // Sum of 1-based average ranks of the positives.
  double rank_sum = 0.0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
    const double avg_rank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) {
      if (labels[order[k]] == 1) rank_sum += avg_rank;
    }
    i = j;
  }
  const double p = static_cast<double>(positives);
  const double u = rank_sum - p * (p + 1.0) / 2.0;
  return u / (p * static_cast<double>(negatives));
}

Prf1 prf1(std::span<const int> decisions, std::span<const int> labels) {
  check_labels(decisions.size(), labels);
  std::size_t tp = 0, fp = 0, fn = 0;
  for (std::size_t i = 0; i < decisions.size(); ++i) {
    const int d = decisions[i];
    if (d != 0 && d != 1) throw InvalidInput("decisions must be 0 or 1");
    if (d == 1 && labels[i] == 1) ++tp;
    if (d == 1 && labels[i] == 0) ++fp;
    if (d == 0 && labels[i] == 1) ++fn;
  }
  Prf1 out;
  if (tp + fp > 0) {
    out.precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
  } else {
    out.degenerate = true;
  }
  if (tp + fn > 0) {
    out.recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
  } else {
    out.degenerate = true;
  }
  if (out.precision + out.recall > 0.0) {
    out.f1 = 2.0 * out.precision * out.recall / (out.precision + out.recall);
  } else {
    out.degenerate = true;
  }
  return out;
}

MeanStd mean_std(std::span<const double> values) {
  if (values.empty()) throw InvalidInput("mean of an empty sequence");
  MeanStd out;
  const double n = static_cast<double>(values.size());
  out.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - out.mean) * (v - out.mean);
    out.std = std::sqrt(ss / (n - 1.0));
  }
  return out;
}

}  // namespace perception
