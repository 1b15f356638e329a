#pragma once

// The single perception neuron.
//
// A neuron learns three integers from its input: the integer median of the
// scaled values, the total absolute deviation S from that median, and the
// window count W. A value z at deviation n = |z - median| is anomalous when
// the expected number of n-tuples under uniform random placement of the S
// deviation quanta into W windows,
//
//     E(C_n) = C(S, n) / W^(n-1),
//
// is below one. Scores are the log form of the same test,
//
//     f(n) = -(ln C(S, n) - (n - 1) ln W) / S,
//
// positive exactly when E(C_n) < 1. For n > S (only possible for values not
// seen during fitting) ln C(S, n) is taken as 0, which makes f linear in n.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace perception {

inline constexpr int kMaxDecimals = 6;

enum class Decision : std::uint8_t { kNormal = 0, kAnomaly = 1 };

struct IntegerizedSeries {
  std::vector<std::int64_t> values;
  int scale_decimals = 0;
};

struct NeuronModel {
  std::int64_t median = 0;           // scaled units
  std::int64_t total_deviation = 0;  // S
  std::int64_t window_count = 1;     // W
  int scale_decimals = 0;

  bool degenerate() const { return total_deviation == 0; }
  friend bool operator==(const NeuronModel&, const NeuronModel&) = default;
};

struct ScoredPoint {
  double raw_value = 0.0;
  std::int64_t deviation = 0;
  double score = 0.0;
  std::optional<double> expected_count;  // absent when deviation > S
  Decision decision = Decision::kNormal;
};

// Smallest d in [0, 6] such that every value * 10^d is an integer (to 1e-9);
// 6 when no smaller d works.
int infer_decimals(std::span<const double> values);

// round-half-away-from-zero(value * 10^d). Throws RangeError on overflow and
// InvalidInput for non-finite values or d outside [0, 6].
std::int64_t scale_to_int(double value, int decimals);
IntegerizedSeries integerize(std::span<const double> values, int decimals);

// Median of integers; for even lengths the mean of the two central values,
// with halves rounded up so that shifting the input shifts the median.
std::int64_t integer_median(std::span<const std::int64_t> values);

// Learns (median, S, W). W counts the values that deviate from the median,
// so observations sitting exactly on the centre do not open a window; when
// every value equals the median (S == 0) W is the number of values.
NeuronModel fit(std::span<const std::int64_t> values, int decimals);
inline NeuronModel fit(const IntegerizedSeries& series) {
  return fit(series.values, series.scale_decimals);
}

// ln C(s, n) without forming the coefficient. Relative error ~1e-14.
double log_binomial(std::int64_t s, std::int64_t n);

// C(s, n) / w^(n-1). Requires 0 <= n <= s and w >= 1.
double expected_count(std::int64_t s, std::int64_t w, std::int64_t n);

// f(n) for a neuron with parameters (s, w). s == 0 yields 0 (a degenerate
// neuron never fires). Exact ties E(C_n) == 1 return exactly 0.
double score_deviation(std::int64_t s, std::int64_t w, std::int64_t n);

inline Decision decide_score(double score) {
  return score > 0.0 ? Decision::kAnomaly : Decision::kNormal;
}

std::int64_t deviation(const NeuronModel& model, double z);
double score(const NeuronModel& model, double z);
Decision decide(const NeuronModel& model, double z);
std::vector<ScoredPoint> score_series(const NeuronModel& model,
                                      std::span<const double> values);

}  // namespace perception
