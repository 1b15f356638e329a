#pragma once

// Evaluation protocol and sweep experiments.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "perception/dataset.hpp"
#include "perception/metrics.hpp"
#include "perception/multivariate.hpp"
#include "perception/network.hpp"

namespace perception {

enum class Method { kSingleNeuron, kNetwork, kExternal };

struct EvalRow {
  std::string dataset;
  std::string method;  // "single_neuron", "network" or a baseline name
  std::optional<std::uint64_t> seed;
  double auc = 0.0;
  // Absent for external scores without a decision column.
  std::optional<Prf1> prf;
  double runtime_seconds = 0.0;  // init + train + predict
};

struct EvalReport {
  std::vector<EvalRow> rows;
  std::vector<std::string> notices;  // skipped datasets and failures
};

// Externally produced scores for one baseline method: a CSV with columns
// `index,score` and optionally `decision`, one row per observation.
struct BaselineScores {
  std::string dataset;
  std::string method;
  std::string path;
};

struct BenchmarkOptions {
  bool single_neuron = true;
  bool network = true;
  std::vector<std::uint64_t> seeds = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  NetworkConfig network_config;  // seed is overwritten per run
  DetectorOptions detector;
  int threads = 0;
  std::vector<BaselineScores> baselines;
};

EvalRow evaluate_single_neuron(const Dataset& data, const DetectorOptions& options = {});
EvalRow evaluate_network(const Dataset& data, const NetworkConfig& config, int threads = 0);

// Unlabeled datasets are skipped with a notice; other failures are recorded
// as notices and the run continues with the next dataset.
EvalReport run_benchmark(const std::vector<Dataset>& datasets, const BenchmarkOptions& options);

// `dataset,method,seed,auc,precision,recall,f1,runtime_seconds`, one row per
// run. Missing values are left empty.
void write_report_csv(const EvalReport& report, std::ostream& out);
// Per dataset and method: AUC and F1 as mean (± std over seeds) and mean runtime.
void write_report_markdown(const EvalReport& report, std::ostream& out);

struct SweepCurve {
  std::vector<double> x;
  std::vector<double> y_mean;
  std::vector<double> y_std;
  std::size_t seeds_used = 0;
};

void write_curve_csv(const SweepCurve& curve, std::ostream& out);

// AUC of the network (ranked by score sum) over seeds for each neuron count.
// One network of max(counts) neurons is fitted per seed; a count k uses its
// first k neurons.
SweepCurve sweep_neuron_count(const Dataset& data, std::vector<std::size_t> counts,
                              const std::vector<std::uint64_t>& seeds,
                              const NetworkConfig& base = {}, int threads = 0);

// Every neuron draws exactly `size` observations.
SweepCurve sweep_subsample_size(const Dataset& data, std::vector<std::size_t> sizes,
                                const std::vector<std::uint64_t>& seeds,
                                const NetworkConfig& base = {}, int threads = 0);

// Fits one full network per seed and evaluates random subsets of `keep`
// neurons drawn from it.
SweepCurve sweep_degrade(const Dataset& data, std::vector<std::size_t> keeps,
                         const std::vector<std::uint64_t>& seeds,
                         const NetworkConfig& base = {}, int threads = 0);

struct ScoreCurve {
  std::vector<double> z;
  std::vector<double> score;
  std::vector<std::int64_t> deviation;
  std::int64_t total_deviation = 0;
  // z values where the deviation equals S; beyond them the score is linear.
  double lower_boundary = 0.0;
  double upper_boundary = 0.0;
};

// Tabulates the score over [z_min, z_max] at steps of 10^-d. Throws
// DegenerateModel for S == 0 and InvalidInput for an empty or oversized range.
ScoreCurve emit_score_curve(const NeuronModel& model, double z_min, double z_max);

// `x,y_mean,y_std,region` with region "binomial" or "linear".
void write_score_curve_csv(const ScoreCurve& curve, std::ostream& out);

}  // namespace perception
