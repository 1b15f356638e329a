#pragma once

// Ensemble of perception neurons.
//
// Every neuron learns from its own random subsample of the observations,
// drawn with replacement at a size from a log-normal law truncated to
// [min(10, N), min(1000, N)]. It first runs the anomaly test on that
// subsample, ejects what it flags, and refits on the rest. Each neuron then
// scores every observation; output nodes add up the scores (used for
// ranking) and the {-1, +1} votes (used for the decision, anomaly when the
// vote sum is strictly positive).
//
// Fitting and prediction run in parallel with OpenMP. Results do not depend
// on the thread count: each neuron draws from its own seeded stream and
// per-observation sums are accumulated in ascending neuron order.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "perception/matrix.hpp"
#include "perception/multivariate.hpp"
#include "perception/neuron.hpp"
#include "perception/rng.hpp"

namespace perception {

struct NetworkConfig {
  std::size_t n_neurons = 256;
  double subsample_mu = 3.0;
  double subsample_sigma = 2.0;
  // Overrides of the min(10, N) / min(1000, N) size bounds.
  std::optional<std::size_t> subsample_min;
  std::optional<std::size_t> subsample_max;
  // Every neuron draws exactly this many observations.
  std::optional<std::size_t> fixed_subsample;
  bool eject = true;
  bool with_replacement = true;
  std::uint64_t seed = 0;
  int scale_decimals = -1;  // -1: infer
  bool standardize = false;

  void validate() const;
  friend bool operator==(const NetworkConfig&, const NetworkConfig&) = default;
};

struct SubsampleDraw {
  std::size_t neuron_index = 0;
  std::vector<std::size_t> indices;
  std::size_t drawn_size() const { return indices.size(); }
};

struct TrainedNeuron {
  Detector detector;
  std::size_t drawn_size = 0;
  std::size_t ejected_count = 0;
  std::size_t retained_count = 0;

  bool degenerate() const { return detector.neuron.degenerate(); }
  friend bool operator==(const TrainedNeuron&, const TrainedNeuron&) = default;
};

struct NetworkModel {
  NetworkConfig config;
  std::size_t dims = 0;
  int scale_decimals = 0;  // resolved scale every neuron uses
  std::vector<TrainedNeuron> neurons;

  friend bool operator==(const NetworkModel&, const NetworkModel&) = default;
};

struct AggregateOutput {
  double score_sum = 0.0;
  std::int64_t vote_sum = 0;
  Decision decision = Decision::kNormal;

  friend bool operator==(const AggregateOutput&, const AggregateOutput&) = default;
};

// Inclusive [lo, hi] subsample size bounds for N observations.
std::pair<std::size_t, std::size_t> subsample_bounds(std::size_t n_obs,
                                                     const NetworkConfig& config);

// round(exp(Normal(mu, sigma))), redrawn until it falls inside the bounds.
std::size_t draw_subsample_size(StreamRng& rng, std::size_t n_obs, const NetworkConfig& config);

// Size and indices for neuron `neuron_index`, from that neuron's own stream.
SubsampleDraw draw_subsample(std::size_t neuron_index, std::size_t n_obs,
                             const NetworkConfig& config);

// Fit on the given rows, eject what the fitted neuron flags among them and
// refit once on the remainder (kept only if at least 3 rows remain).
TrainedNeuron train_neuron(const Matrix& data, std::span<const std::size_t> rows,
                           int decimals, bool standardize, bool eject = true);
TrainedNeuron train_neuron(std::span<const double> values, int decimals, bool eject = true);

NetworkModel fit_network(const Matrix& data, const NetworkConfig& config, int threads = 0);

std::vector<AggregateOutput> predict(const NetworkModel& network, const Matrix& data,
                                     int threads = 0);

// Scores of one neuron over all observations.
std::vector<double> neuron_scores(const TrainedNeuron& neuron, const Matrix& data);

// Copy keeping a uniformly random subset of `keep` neurons, in their
// original relative order.
NetworkModel degrade(const NetworkModel& network, std::size_t keep, std::uint64_t seed);

// Copy keeping neurons [0, count).
NetworkModel truncate(const NetworkModel& network, std::size_t count);

// Straightforward single-threaded versions of fit_network and predict. They
// define the expected output of the parallel kernels and are used by the
// tests and benchmarks only.
namespace reference {

NetworkModel fit_network(const Matrix& data, const NetworkConfig& config);
std::vector<AggregateOutput> predict(const NetworkModel& network, const Matrix& data);

}  // namespace reference

}  // namespace perception
