#include "perception/neuron.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "perception/error.hpp"

namespace perception {
namespace {

constexpr std::array<double, kMaxDecimals + 1> kPow10 = {
    1.0, 10.0, 100.0, 1000.0, 10000.0, 100000.0, 1000000.0};

// Largest S for which near-ties E(C_n) ~ 1 are settled with exact integers.
constexpr std::int64_t kExactTieLimit = 4096;

void check_decimals(int decimals) {
  if (decimals < 0 || decimals > kMaxDecimals) {
    throw InvalidInput("scale decimals must be in [0, 6], got " +
                       std::to_string(decimals));
  }
}

// Stirling remainder lgamma(x) - ((x - 1/2) ln x - x + ln sqrt(2 pi)), x >= 10.
double stirling_remainder(double x) {
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  return inv *
         (1.0 / 12.0 +
          inv2 * (-1.0 / 360.0 +
                  inv2 * (1.0 / 1260.0 +
                          inv2 * (-1.0 / 1680.0 +
                                  inv2 * (1.0 / 1188.0 +
                                          inv2 * (-691.0 / 360360.0 +
                                                  inv2 * (1.0 / 156.0)))))));
}

// ln B(p, q) for 10 <= p <= q, arranged so nothing large cancels.
double log_beta_large(double p, double q) {
  constexpr double kLnSqrt2Pi = 0.918938533204672741780329736406;
  const double sum = p + q;
  const double corr =
      stirling_remainder(p) + stirling_remainder(q) - stirling_remainder(sum);
  return -0.5 * std::log(q) + kLnSqrt2Pi + corr +
         (p - 0.5) * std::log(p / sum) + q * std::log1p(-p / sum);
}

// Sign of C(s, n) - w^(n-1), computed exactly.
int exact_tie_sign(std::int64_t s, std::int64_t w, std::int64_t n) {
  using boost::multiprecision::cpp_int;
  const std::int64_t k = std::min(n, s - n);
  cpp_int binom = 1;
  for (std::int64_t i = 1; i <= k; ++i) {
    binom *= s - k + i;
    binom /= i;
  }
  const cpp_int power =
      boost::multiprecision::pow(cpp_int(w), static_cast<unsigned>(n - 1));
  return binom < power ? -1 : (binom > power ? 1 : 0);
}

}  // namespace

int infer_decimals(std::span<const double> values) {
  for (int d = 0; d < kMaxDecimals; ++d) {
    const bool integral = std::all_of(values.begin(), values.end(), [d](double v) {
      const double scaled = v * kPow10[d];
      const double tol =
          std::max(1e-9, 8 * std::numeric_limits<double>::epsilon() * std::abs(scaled));
      return std::abs(scaled - std::round(scaled)) <= tol;
    });
    if (integral) return d;
  }
  return kMaxDecimals;
}

std::int64_t scale_to_int(double value, int decimals) {
  check_decimals(decimals);
  if (!std::isfinite(value)) throw InvalidInput("non-finite input value");
  const double scaled = std::abs(value * kPow10[decimals]);
  double whole = std::floor(scaled);
  // Products a few ulps below a .5 boundary are decimal halves that binary
  // could not represent (2.345 * 100 = 234.49999999999997).
  const double tol = 1e-9 + 8 * std::numeric_limits<double>::epsilon() * scaled;
  if (scaled - whole >= 0.5 - tol) whole += 1.0;
  if (whole >= 9.2e18) {
    throw RangeError("value " + std::to_string(value) +
                     " overflows 64-bit integers at " + std::to_string(decimals) +
                     " decimals");
  }
  const auto magnitude = static_cast<std::int64_t>(whole);
  return value < 0 ? -magnitude : magnitude;
}

IntegerizedSeries integerize(std::span<const double> values, int decimals) {
  check_decimals(decimals);
  IntegerizedSeries out;
  out.scale_decimals = decimals;
  out.values.reserve(values.size());
  for (double v : values) out.values.push_back(scale_to_int(v, decimals));
  return out;
}

std::int64_t integer_median(std::span<const std::int64_t> values) {
  if (values.empty()) throw InvalidInput("median of an empty series");
  std::vector<std::int64_t> v(values.begin(), values.end());
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + mid, v.end());
  const std::int64_t upper = v[mid];
  if (v.size() % 2 == 1) return upper;
  const std::int64_t lower = *std::max_element(v.begin(), v.begin() + mid);
  // ceil((lower + upper) / 2) without overflowing the sum. Rounding half
  // towards +inf commutes with integer shifts; half away from zero does not.
  const std::int64_t half_floor = (lower >> 1) + (upper >> 1);
  return half_floor + ((lower & 1) | (upper & 1));
}

NeuronModel fit(std::span<const std::int64_t> values, int decimals) {
  check_decimals(decimals);
  if (values.empty()) throw InvalidInput("cannot fit a neuron on an empty series");
  NeuronModel model;
  model.scale_decimals = decimals;
  model.median = integer_median(values);
  std::int64_t windows = 0;
  for (std::int64_t x : values) {
    std::int64_t dev = 0;
    if (__builtin_sub_overflow(x, model.median, &dev) ||
        __builtin_add_overflow(model.total_deviation, dev < 0 ? -dev : dev,
                               &model.total_deviation)) {
      throw RangeError("total deviation overflows 64-bit integers");
    }
    if (dev != 0) ++windows;
  }
  model.window_count =
      model.total_deviation == 0 ? static_cast<std::int64_t>(values.size()) : windows;
  return model;
}

double log_binomial(std::int64_t s, std::int64_t n) {
  if (n < 0 || n > s) {
    throw DomainError("log_binomial requires 0 <= n <= S (S=" + std::to_string(s) +
                      ", n=" + std::to_string(n) + ")");
  }
  const std::int64_t k = std::min(n, s - n);
  if (k == 0) return 0.0;
  if (k < 10) {
    double acc = 0.0;
    for (std::int64_t i = 1; i <= k; ++i) {
      acc += std::log(static_cast<double>(s - k + i) / static_cast<double>(i));
    }
    return acc;
  }
  // ln C(s, k) = -ln B(k + 1, s - k + 1) - ln(s + 1)
  return -log_beta_large(static_cast<double>(k + 1), static_cast<double>(s - k + 1)) -
         std::log1p(static_cast<double>(s));
}

namespace {

// ln E(C_n) for 0 <= n <= s. Near zero the sign is settled exactly so that
// E == 1 gives exactly 0 and E < 1 is never reported as >= 1.
double log_expected(std::int64_t s, std::int64_t w, std::int64_t n) {
  if (w < 1) throw InvalidInput("window count must be >= 1");
  const double penalty = static_cast<double>(n - 1) * std::log(static_cast<double>(w));
  const double excess = log_binomial(s, n) - penalty;
  if (n < 1 || s > kExactTieLimit ||
      std::abs(excess) > 1e-9 * std::max(1.0, std::abs(penalty))) {
    return excess;
  }
  constexpr double kTiny = 1e-300;
  const int sign = exact_tie_sign(s, w, n);
  if (sign == 0) return 0.0;
  return sign * std::max(std::abs(excess), kTiny);
}

}  // namespace

double expected_count(std::int64_t s, std::int64_t w, std::int64_t n) {
  const double excess = log_expected(s, w, n);
  const double e = std::exp(excess);
  if (excess < 0 && e >= 1.0) return std::nextafter(1.0, 0.0);
  if (excess > 0 && e <= 1.0) return std::nextafter(1.0, 2.0);
  return e;
}

double score_deviation(std::int64_t s, std::int64_t w, std::int64_t n) {
  if (s == 0) return 0.0;
  if (n < 0) throw DomainError("negative deviation");
  if (w < 1) throw InvalidInput("window count must be >= 1");
  const double sd = static_cast<double>(s);
  if (n > s) return static_cast<double>(n - 1) * std::log(static_cast<double>(w)) / sd;
  const double f = -log_expected(s, w, n) / sd;
  return f == 0.0 ? 0.0 : f;
}

std::int64_t deviation(const NeuronModel& model, double z) {
  const std::int64_t scaled = scale_to_int(z, model.scale_decimals);
  std::int64_t dev = 0;
  if (__builtin_sub_overflow(scaled, model.median, &dev) ||
      dev == std::numeric_limits<std::int64_t>::min()) {
    throw RangeError("deviation overflows 64-bit integers");
  }
  return dev < 0 ? -dev : dev;
}

double score(const NeuronModel& model, double z) {
  return score_deviation(model.total_deviation, model.window_count, deviation(model, z));
}

Decision decide(const NeuronModel& model, double z) { return decide_score(score(model, z)); }

std::vector<ScoredPoint> score_series(const NeuronModel& model,
                                      std::span<const double> values) {
  std::vector<ScoredPoint> out;
  out.reserve(values.size());
  for (double v : values) {
    ScoredPoint p;
    p.raw_value = v;
    p.deviation = deviation(model, v);
    p.score = score_deviation(model.total_deviation, model.window_count, p.deviation);
    if (p.deviation <= model.total_deviation) {
      p.expected_count =
          expected_count(model.total_deviation, model.window_count, p.deviation);
    }
    p.decision = decide_score(p.score);
    out.push_back(p);
  }
  return out;
}

}  // namespace perception
