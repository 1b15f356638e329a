#include "perception/network.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>
#include <string>

#include "perception/error.hpp"

namespace perception {
namespace {

// Runs body(i) for i in [0, n) on OpenMP threads. The exception of the
// lowest failing index is rethrown once the loop is done.
template <typename Body>
void parallel_for(std::size_t n, int threads, Body&& body) {
  std::vector<std::exception_ptr> errors(n);
  const int team = threads > 0 ? threads : omp_get_max_threads();
  const auto count = static_cast<std::int64_t>(n);
#pragma omp parallel for num_threads(team) schedule(dynamic, 16)
  for (std::int64_t i = 0; i < count; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

void check_dims(const NetworkModel& network, const Matrix& data) {
  if (data.cols() != network.dims) {
    throw InvalidInput("network was fitted on " + std::to_string(network.dims) +
                       " features, data has " + std::to_string(data.cols()));
  }
}

void check_fit_inputs(const Matrix& data, const NetworkConfig& config) {
  config.validate();
  if (data.empty()) throw InvalidInput("cannot fit a network on an empty dataset");
  if (data.cols() == 0) throw InvalidInput("dataset has no features");
  if (config.fixed_subsample) {
    const auto [lo, hi] = subsample_bounds(data.rows(), config);
    const std::size_t size = *config.fixed_subsample;
    if (size > data.rows()) {
      throw InvalidInput("fixed subsample size " + std::to_string(size) +
                         " exceeds the number of observations " +
                         std::to_string(data.rows()));
    }
    if (size < lo) {
      throw InvalidInput("fixed subsample size " + std::to_string(size) +
                         " is below the lower size bound " + std::to_string(lo));
    }
  }
}

int network_decimals(const Matrix& data, const NetworkConfig& config) {
  return resolve_decimals(data, {config.scale_decimals, config.standardize});
}

}  // namespace

void NetworkConfig::validate() const {
  if (n_neurons < 1) throw InvalidInput("a network needs at least one neuron");
  if (!(subsample_sigma > 0.0) || !std::isfinite(subsample_sigma)) {
    throw InvalidInput("subsample sigma must be positive");
  }
  if (!std::isfinite(subsample_mu)) throw InvalidInput("subsample mu must be finite");
  if (subsample_min && *subsample_min < 1) throw InvalidInput("subsample minimum must be >= 1");
  if (subsample_min && subsample_max && *subsample_min > *subsample_max) {
    throw InvalidInput("subsample minimum exceeds maximum");
  }
  if (fixed_subsample && *fixed_subsample < 1) {
    throw InvalidInput("fixed subsample size must be >= 1");
  }
  if (scale_decimals < -1 || scale_decimals > kMaxDecimals) {
    throw InvalidInput("scale decimals must be auto or in [0, 6]");
  }
}

std::pair<std::size_t, std::size_t> subsample_bounds(std::size_t n_obs,
                                                     const NetworkConfig& config) {
  const std::size_t lo = std::min(config.subsample_min.value_or(10), n_obs);
  const std::size_t hi = std::min(config.subsample_max.value_or(1000), n_obs);
  return {lo, std::max(lo, hi)};
}

std::size_t draw_subsample_size(StreamRng& rng, std::size_t n_obs, const NetworkConfig& config) {
  const auto [lo, hi] = subsample_bounds(n_obs, config);
  if (lo == hi) return lo;
  const double lo_d = static_cast<double>(lo);
  const double hi_d = static_cast<double>(hi);
  for (;;) {
    const double size = std::round(std::exp(rng.normal(config.subsample_mu, config.subsample_sigma)));
    if (size >= lo_d && size <= hi_d) return static_cast<std::size_t>(size);
  }
}

SubsampleDraw draw_subsample(std::size_t neuron_index, std::size_t n_obs,
                             const NetworkConfig& config) {
  if (n_obs == 0) throw InvalidInput("cannot subsample zero observations");
  StreamRng rng(config.seed, neuron_index);
  SubsampleDraw draw;
  draw.neuron_index = neuron_index;
  const std::size_t size =
      config.fixed_subsample ? *config.fixed_subsample : draw_subsample_size(rng, n_obs, config);
  draw.indices.reserve(size);
  if (config.with_replacement) {
    for (std::size_t k = 0; k < size; ++k) draw.indices.push_back(rng.below(n_obs));
  } else {
    if (size > n_obs) throw InvalidInput("subsample without replacement larger than data");
    std::vector<std::size_t> pool(n_obs);
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    for (std::size_t k = 0; k < size; ++k) {
      std::swap(pool[k], pool[k + rng.below(n_obs - k)]);
      draw.indices.push_back(pool[k]);
    }
  }
  return draw;
}

TrainedNeuron train_neuron(const Matrix& data, std::span<const std::size_t> rows,
                           int decimals, bool standardize, bool eject) {
  if (rows.empty()) throw InvalidInput("cannot train a neuron on an empty subsample");
  TrainedNeuron out;
  out.detector = fit_detector(data, rows, decimals, standardize);
  out.drawn_size = rows.size();
  out.retained_count = rows.size();
  if (!eject || out.degenerate()) return out;

  std::vector<std::size_t> kept;
  kept.reserve(rows.size());
  for (std::size_t r : rows) {
    if (out.detector.decide(data.row(r)) == Decision::kNormal) kept.push_back(r);
  }
  if (kept.size() == rows.size() || kept.size() < 3) return out;
  out.detector = fit_detector(data, kept, decimals, standardize);
  out.ejected_count = rows.size() - kept.size();
  out.retained_count = kept.size();
  return out;
}

TrainedNeuron train_neuron(std::span<const double> values, int decimals, bool eject) {
  const Matrix data = Matrix::column(values);
  std::vector<std::size_t> rows(values.size());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  return train_neuron(data, rows, decimals, false, eject);
}

NetworkModel fit_network(const Matrix& data, const NetworkConfig& config, int threads) {
  check_fit_inputs(data, config);
  NetworkModel model;
  model.config = config;
  model.dims = data.cols();
  model.scale_decimals = network_decimals(data, config);
  model.neurons.resize(config.n_neurons);
  parallel_for(config.n_neurons, threads, [&](std::size_t i) {
    const SubsampleDraw draw = draw_subsample(i, data.rows(), config);
    model.neurons[i] = train_neuron(data, draw.indices, model.scale_decimals,
                                    config.standardize, config.eject);
  });
  return model;
}

std::vector<AggregateOutput> predict(const NetworkModel& network, const Matrix& data,
                                     int threads) {
  check_dims(network, data);
  std::vector<AggregateOutput> out(data.rows());
  parallel_for(data.rows(), threads, [&](std::size_t i) {
    const auto row = data.row(i);
    AggregateOutput agg;
    for (const TrainedNeuron& neuron : network.neurons) {
      const double f = neuron.detector.score(row);
      agg.score_sum += f;
      agg.vote_sum += f > 0.0 ? 1 : -1;
    }
    agg.decision = agg.vote_sum > 0 ? Decision::kAnomaly : Decision::kNormal;
    out[i] = agg;
  });
  return out;
}

std::vector<double> neuron_scores(const TrainedNeuron& neuron, const Matrix& data) {
  std::vector<double> out(data.rows());
  for (std::size_t i = 0; i < data.rows(); ++i) out[i] = neuron.detector.score(data.row(i));
  return out;
}

NetworkModel degrade(const NetworkModel& network, std::size_t keep, std::uint64_t seed) {
  const std::size_t total = network.neurons.size();
  if (keep < 1 || keep > total) {
    throw InvalidInput("keep must be in [1, " + std::to_string(total) + "], got " +
                       std::to_string(keep));
  }
  StreamRng rng(seed, 0xDE6ADEULL);
  std::vector<std::size_t> pool(total);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  for (std::size_t k = 0; k < keep; ++k) std::swap(pool[k], pool[k + rng.below(total - k)]);
  pool.resize(keep);
  std::sort(pool.begin(), pool.end());

  NetworkModel out;
  out.config = network.config;
  out.config.n_neurons = keep;
  out.dims = network.dims;
  out.scale_decimals = network.scale_decimals;
  out.neurons.reserve(keep);
  for (std::size_t idx : pool) out.neurons.push_back(network.neurons[idx]);
  return out;
}

NetworkModel truncate(const NetworkModel& network, std::size_t count) {
  if (count < 1 || count > network.neurons.size()) {
    throw InvalidInput("truncate count out of range");
  }
  NetworkModel out = network;
  out.neurons.resize(count);
  out.config.n_neurons = count;
  return out;
}

namespace reference {

NetworkModel fit_network(const Matrix& data, const NetworkConfig& config) {
  check_fit_inputs(data, config);
  NetworkModel model;
  model.config = config;
  model.dims = data.cols();
  model.scale_decimals = network_decimals(data, config);
  for (std::size_t i = 0; i < config.n_neurons; ++i) {
    const SubsampleDraw draw = draw_subsample(i, data.rows(), config);
    model.neurons.push_back(train_neuron(data, draw.indices, model.scale_decimals,
                                         config.standardize, config.eject));
  }
  return model;
}

std::vector<AggregateOutput> predict(const NetworkModel& network, const Matrix& data) {
  check_dims(network, data);
  std::vector<AggregateOutput> out(data.rows());
  for (const TrainedNeuron& neuron : network.neurons) {
    const std::vector<double> scores = neuron_scores(neuron, data);
    for (std::size_t i = 0; i < data.rows(); ++i) {
      out[i].score_sum += scores[i];
      out[i].vote_sum += scores[i] > 0.0 ? 1 : -1;
    }
  }
  for (auto& agg : out) {
    agg.decision = agg.vote_sum > 0 ? Decision::kAnomaly : Decision::kNormal;
  }
  return out;
}

}  // namespace reference
}  // namespace perception
