#include "perception/experiments.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cmath>
#include <map>
#include <ostream>

#include "perception/error.hpp"

namespace perception {
namespace {

using Clock = std::chrono::steady_clock;

const std::vector<int>& require_labels(const Dataset& data) {
  if (!data.labeled()) throw InvalidInput(data.name + ": dataset has no labels");
  return *data.labels;
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void sort_unique(std::vector<std::size_t>& xs, const char* what) {
  if (xs.empty()) throw InvalidInput(std::string("no ") + what + " given");
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
}

void require_seeds(const std::vector<std::uint64_t>& seeds) {
  if (seeds.empty()) throw InvalidInput("at least one seed is required");
}

double network_auc(const NetworkModel& net, const Dataset& data, int threads) {
  const auto out = predict(net, data.features, threads);
  std::vector<double> scores(out.size());
  for (std::size_t i = 0; i < out.size(); ++i) scores[i] = out[i].score_sum;
  return roc_auc(scores, *data.labels);
}

SweepCurve summarize(const std::vector<std::size_t>& xs,
                     const std::vector<std::vector<double>>& per_x, std::size_t seeds) {
  SweepCurve curve;
  curve.seeds_used = seeds;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    const MeanStd ms = mean_std(per_x[k]);
    curve.x.push_back(static_cast<double>(xs[k]));
    curve.y_mean.push_back(ms.mean);
    curve.y_std.push_back(ms.std);
  }
  return curve;
}

EvalRow evaluate_baseline(const Dataset& data, const BaselineScores& baseline) {
  const Dataset scores = load_csv(baseline.path);
  const auto col = [&](const std::string& name) -> std::optional<std::size_t> {
    const auto& names = scores.feature_names;
    const auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) return std::nullopt;
    return static_cast<std::size_t>(it - names.begin());
  };
  const auto score_col = col("score");
  if (!score_col) throw DataError(baseline.path + ": missing 'score' column");
  if (scores.size() != data.size()) {
    throw DataError(baseline.path + ": " + std::to_string(scores.size()) + " rows, dataset has " +
                    std::to_string(data.size()));
  }
  EvalRow row;
  row.dataset = data.name;
  row.method = baseline.method;
  row.auc = roc_auc(scores.features.column_values(*score_col), *data.labels);
  if (const auto decision_col = col("decision")) {
    std::vector<int> decisions;
    for (double v : scores.features.column_values(*decision_col)) {
      decisions.push_back(v > 0.0 ? 1 : 0);
    }
    row.prf = prf1(decisions, *data.labels);
  }
  return row;
}

std::string fmt(double v) { return format_score(v); }

}  // namespace

EvalRow evaluate_single_neuron(const Dataset& data, const DetectorOptions& options) {
  const auto& labels = require_labels(data);
  const auto start = Clock::now();
  const Detector det = fit_detector(data.features, options);
  std::vector<double> scores(data.size());
  std::vector<int> decisions(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    scores[i] = det.score(data.features.row(i));
    decisions[i] = scores[i] > 0.0 ? 1 : 0;
  }
  EvalRow row;
  row.runtime_seconds = seconds_since(start);
  row.dataset = data.name;
  row.method = "single_neuron";
  row.auc = roc_auc(scores, labels);
  row.prf = prf1(decisions, labels);
  return row;
}

EvalRow evaluate_network(const Dataset& data, const NetworkConfig& config, int threads) {
  const auto& labels = require_labels(data);
  const auto start = Clock::now();
  const NetworkModel net = fit_network(data.features, config, threads);
  const auto out = predict(net, data.features, threads);
  EvalRow row;
  row.runtime_seconds = seconds_since(start);
  std::vector<double> scores(out.size());
  std::vector<int> decisions(out.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    scores[i] = out[i].score_sum;
    decisions[i] = out[i].decision == Decision::kAnomaly ? 1 : 0;
  }
  row.dataset = data.name;
  row.method = "network";
  row.seed = config.seed;
  row.auc = roc_auc(scores, labels);
  row.prf = prf1(decisions, labels);
  return row;
}

EvalReport run_benchmark(const std::vector<Dataset>& datasets, const BenchmarkOptions& options) {
  if (options.network) require_seeds(options.seeds);
  EvalReport report;
  for (const Dataset& data : datasets) {
    if (!data.labeled()) {
      report.notices.push_back(data.name + ": skipped, no labels");
      continue;
    }
    try {
      std::vector<EvalRow> rows;
      if (options.single_neuron) rows.push_back(evaluate_single_neuron(data, options.detector));
      if (options.network) {
        for (std::uint64_t seed : options.seeds) {
          NetworkConfig cfg = options.network_config;
          cfg.seed = seed;
          rows.push_back(evaluate_network(data, cfg, options.threads));
        }
      }
      for (const BaselineScores& b : options.baselines) {
        if (b.dataset == data.name) rows.push_back(evaluate_baseline(data, b));
      }
      report.rows.insert(report.rows.end(), rows.begin(), rows.end());
    } catch (const std::exception& e) {
      report.notices.push_back(data.name + ": failed, " + e.what());
    }
  }
  return report;
}

void write_report_csv(const EvalReport& report, std::ostream& out) {
  out << "dataset,method,seed,auc,precision,recall,f1,runtime_seconds\n";
  for (const EvalRow& r : report.rows) {
    out << r.dataset << ',' << r.method << ',';
    if (r.seed) out << *r.seed;
    out << ',' << fmt(r.auc) << ',';
    if (r.prf) {
      out << fmt(r.prf->precision) << ',' << fmt(r.prf->recall) << ',' << fmt(r.prf->f1);
    } else {
      out << ",,";
    }
    out << ',' << fmt(r.runtime_seconds) << '\n';
  }
}

void write_report_markdown(const EvalReport& report, std::ostream& out) {
  std::vector<std::string> datasets;
  std::vector<std::string> methods;
  std::map<std::pair<std::string, std::string>, std::vector<const EvalRow*>> cells;
  for (const EvalRow& r : report.rows) {
    if (std::find(datasets.begin(), datasets.end(), r.dataset) == datasets.end()) {
      datasets.push_back(r.dataset);
    }
    if (std::find(methods.begin(), methods.end(), r.method) == methods.end()) {
      methods.push_back(r.method);
    }
    cells[{r.dataset, r.method}].push_back(&r);
  }

  const auto table = [&](const std::string& title, auto metric) {
    out << "### " << title << "\n\n| dataset |";
    for (const auto& m : methods) out << ' ' << m << " |";
    out << "\n|---|";
    for (std::size_t i = 0; i < methods.size(); ++i) out << "---|";
    out << '\n';
    for (const auto& d : datasets) {
      out << "| " << d << " |";
      for (const auto& m : methods) {
        const auto it = cells.find({d, m});
        std::vector<double> values;
        if (it != cells.end()) {
          for (const EvalRow* r : it->second) {
            if (const auto v = metric(*r)) values.push_back(*v);
          }
        }
        if (values.empty()) {
          out << " - |";
          continue;
        }
        const MeanStd ms = mean_std(values);
        char buf[64];
        if (values.size() > 1) {
          std::snprintf(buf, sizeof buf, " %.3f ± %.3f |", ms.mean, ms.std);
        } else {
          std::snprintf(buf, sizeof buf, " %.3f |", ms.mean);
        }
        out << buf;
      }
      out << '\n';
    }
    out << '\n';
  };

  table("AUC", [](const EvalRow& r) { return std::optional<double>(r.auc); });
  table("F1", [](const EvalRow& r) {
    return r.prf ? std::optional<double>(r.prf->f1) : std::nullopt;
  });
  table("Runtime (s)", [](const EvalRow& r) {
    return r.method == "single_neuron" || r.method == "network"
               ? std::optional<double>(r.runtime_seconds)
               : std::nullopt;
  });
  for (const auto& n : report.notices) out << "- " << n << '\n';
}

void write_curve_csv(const SweepCurve& curve, std::ostream& out) {
  out << "x,y_mean,y_std\n";
  for (std::size_t i = 0; i < curve.x.size(); ++i) {
    out << fmt(curve.x[i]) << ',' << fmt(curve.y_mean[i]) << ',' << fmt(curve.y_std[i]) << '\n';
  }
}

SweepCurve sweep_neuron_count(const Dataset& data, std::vector<std::size_t> counts,
                              const std::vector<std::uint64_t>& seeds,
                              const NetworkConfig& base, int threads) {
  require_labels(data);
  require_seeds(seeds);
  sort_unique(counts, "neuron counts");
  if (counts.front() < 1) throw InvalidInput("neuron counts must be >= 1");

  std::vector<std::vector<double>> per_count(counts.size());
  for (std::uint64_t seed : seeds) {
    NetworkConfig cfg = base;
    cfg.seed = seed;
    cfg.n_neurons = counts.back();
    const NetworkModel net = fit_network(data.features, cfg, threads);
    // Running sums in ascending neuron order, snapshotted at each count;
    // identical to predicting with the truncated network.
    std::vector<std::vector<double>> scores(counts.size(), std::vector<double>(data.size()));
    const auto rows = static_cast<std::int64_t>(data.size());
#pragma omp parallel for schedule(static) num_threads(threads > 0 ? threads : omp_get_max_threads())
    for (std::int64_t i = 0; i < rows; ++i) {
      const auto row = data.features.row(static_cast<std::size_t>(i));
      double acc = 0.0;
      std::size_t next = 0;
      for (std::size_t k = 0; k < net.neurons.size(); ++k) {
        acc += net.neurons[k].detector.score(row);
        while (next < counts.size() && counts[next] == k + 1) {
          scores[next++][static_cast<std::size_t>(i)] = acc;
        }
      }
    }
    for (std::size_t c = 0; c < counts.size(); ++c) {
      per_count[c].push_back(roc_auc(scores[c], *data.labels));
    }
  }
  return summarize(counts, per_count, seeds.size());
}

SweepCurve sweep_subsample_size(const Dataset& data, std::vector<std::size_t> sizes,
                                const std::vector<std::uint64_t>& seeds,
                                const NetworkConfig& base, int threads) {
  require_labels(data);
  require_seeds(seeds);
  sort_unique(sizes, "subsample sizes");
  std::vector<std::vector<double>> per_size(sizes.size());
  for (std::size_t k = 0; k < sizes.size(); ++k) {
    for (std::uint64_t seed : seeds) {
      NetworkConfig cfg = base;
      cfg.seed = seed;
      cfg.fixed_subsample = sizes[k];
      per_size[k].push_back(network_auc(fit_network(data.features, cfg, threads), data, threads));
    }
  }
  return summarize(sizes, per_size, seeds.size());
}

SweepCurve sweep_degrade(const Dataset& data, std::vector<std::size_t> keeps,
                         const std::vector<std::uint64_t>& seeds, const NetworkConfig& base,
                         int threads) {
  require_labels(data);
  require_seeds(seeds);
  sort_unique(keeps, "keep counts");
  std::vector<std::vector<double>> per_keep(keeps.size());
  for (std::uint64_t seed : seeds) {
    NetworkConfig cfg = base;
    cfg.seed = seed;
    const NetworkModel net = fit_network(data.features, cfg, threads);
    for (std::size_t k = 0; k < keeps.size(); ++k) {
      per_keep[k].push_back(network_auc(degrade(net, keeps[k], seed), data, threads));
    }
  }
  return summarize(keeps, per_keep, seeds.size());
}

ScoreCurve emit_score_curve(const NeuronModel& model, double z_min, double z_max) {
  if (model.degenerate()) {
    throw DegenerateModel("score curve of a neuron with S = 0 is identically zero");
  }
  if (!(z_min <= z_max)) throw InvalidInput("score curve range is empty");
  const std::int64_t lo = scale_to_int(z_min, model.scale_decimals);
  const std::int64_t hi = scale_to_int(z_max, model.scale_decimals);
  constexpr std::int64_t kMaxPoints = 2'000'001;
  if (hi - lo + 1 > kMaxPoints) {
    throw InvalidInput("score curve range spans more than " + std::to_string(kMaxPoints) +
                       " steps");
  }
  const double unit = std::pow(10.0, model.scale_decimals);
  ScoreCurve curve;
  for (std::int64_t k = lo; k <= hi; ++k) {
    const std::int64_t n = k >= model.median ? k - model.median : model.median - k;
    curve.z.push_back(static_cast<double>(k) / unit);
    curve.deviation.push_back(n);
    curve.score.push_back(score_deviation(model.total_deviation, model.window_count, n));
  }
  curve.total_deviation = model.total_deviation;
  curve.lower_boundary = static_cast<double>(model.median - model.total_deviation) / unit;
  curve.upper_boundary = static_cast<double>(model.median + model.total_deviation) / unit;
  return curve;
}

void write_score_curve_csv(const ScoreCurve& curve, std::ostream& out) {
  out << "x,y_mean,y_std,region\n";
  for (std::size_t i = 0; i < curve.z.size(); ++i) {
    const bool linear = curve.deviation[i] > curve.total_deviation;
    out << fmt(curve.z[i]) << ',' << fmt(curve.score[i]) << ",0,"
        << (linear ? "linear" : "binomial") << '\n';
  }
}

}  // namespace perception
