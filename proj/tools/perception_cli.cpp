// Command-line front end. Results go to --output (or stdout), diagnostics
// to stderr. Exit codes: 0 ok, 1 usage, 2 data, 3 internal.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "perception/dataset.hpp"
#include "perception/error.hpp"
#include "perception/experiments.hpp"
#include "perception/model_io.hpp"
#include "perception/network.hpp"

namespace fs = std::filesystem;
using namespace perception;

namespace {

enum Exit { kOk = 0, kUsage = 1, kData = 2, kInternal = 3 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  std::string input;
  std::string label_col;
  std::string decimals = "auto";
  std::string output;
  bool standardize = false;
};

struct NetFlags {
  std::size_t neurons = 256;
  std::uint64_t seed = 0;
  std::optional<int> threads;
  std::optional<std::size_t> sub_min;
  std::optional<std::size_t> sub_max;
  std::optional<std::size_t> fixed;
  bool no_eject = false;
  std::string model;
};

int parse_decimals(const std::string& text) {
  if (text == "auto") return -1;
  if (text.size() == 1 && text[0] >= '0' && text[0] <= '6') return text[0] - '0';
  throw UsageError("--decimals must be auto or 0..6, got '" + text + "'");
}

int resolve_threads(const std::optional<int>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("PERCEPTION_NET_THREADS"); env && *env) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (*end != '\0' || v < 1 || v > 4096) {
      throw UsageError(std::string("PERCEPTION_NET_THREADS must be a positive integer, got '") +
                       env + "'");
    }
    return static_cast<int>(v);
  }
  return 0;
}

std::optional<std::string> label_of(const Common& c) {
  if (c.label_col.empty()) return std::nullopt;
  return c.label_col;
}

void add_common(CLI::App* cmd, Common& c, bool with_input = true) {
  if (with_input) cmd->add_option("input", c.input, "Input CSV with a header row")->required();
  cmd->add_option("--label-col", c.label_col, "Name of the 0/1 label column (excluded from features)");
  cmd->add_option("--decimals", c.decimals, "Integer scale: auto or 0..6")->default_str("auto");
  cmd->add_option("--output,-o", c.output, "Output path (default: stdout)");
  cmd->add_flag("--standardize", c.standardize,
                "Divide feature deviations by their MAD (multivariate only)");
}

void add_net(CLI::App* cmd, NetFlags& n) {
  cmd->add_option("--neurons", n.neurons, "Number of neurons")
      ->default_val(256)
      ->check(CLI::PositiveNumber);
  cmd->add_option("--seed", n.seed, "Master seed")->default_val(0);
  cmd->add_option("--threads", n.threads,
                  "Worker threads (default: $PERCEPTION_NET_THREADS or all cores)")
      ->check(CLI::Range(1, 4096));
  cmd->add_option("--subsample-min", n.sub_min, "Lower subsample size bound (default min(10, N))")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--subsample-max", n.sub_max,
                  "Upper subsample size bound (default min(1000, N))")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--fixed-subsample", n.fixed, "Every neuron draws exactly this many rows")
      ->check(CLI::PositiveNumber);
  cmd->add_flag("--no-eject", n.no_eject, "Skip the eject-and-refit step");
}

NetworkConfig make_config(const Common& c, const NetFlags& n) {
  NetworkConfig cfg;
  cfg.n_neurons = n.neurons;
  cfg.seed = n.seed;
  cfg.subsample_min = n.sub_min;
  cfg.subsample_max = n.sub_max;
  cfg.fixed_subsample = n.fixed;
  cfg.eject = !n.no_eject;
  cfg.scale_decimals = parse_decimals(c.decimals);
  cfg.standardize = c.standardize;
  if (cfg.subsample_min && cfg.subsample_max && *cfg.subsample_min > *cfg.subsample_max) {
    throw UsageError("--subsample-min exceeds --subsample-max");
  }
  return cfg;
}

// Runs `emit` against the output file or stdout. The file is only created
// once the results exist.
template <typename Emit>
void emit_output(const std::string& path, Emit&& emit) {
  if (path.empty()) {
    emit(std::cout);
    std::cout.flush();
    return;
  }
  std::ostringstream buffer;
  emit(buffer);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write file: " + path);
  out << buffer.str();
  if (!out.flush()) throw DataError("failed writing " + path);
}

void report_network(const NetworkModel& net) {
  std::size_t degenerate = 0, ejected = 0, refit = 0;
  for (const auto& n : net.neurons) {
    degenerate += n.degenerate() ? 1 : 0;
    ejected += n.ejected_count;
    refit += n.ejected_count > 0 ? 1 : 0;
  }
  std::cerr << "network: " << net.neurons.size() << " neurons, scale 10^" << net.scale_decimals
            << ", " << refit << " refitted after ejecting " << ejected << " points, "
            << degenerate << " degenerate\n";
}

void write_network_scores(const NetworkModel& net, const Dataset& data, int threads,
                          const std::string& output) {
  const ScoreReport report = make_score_report(predict(net, data.features, threads));
  const auto flagged = std::count_if(report.begin(), report.end(),
                                     [](const ScoreRow& r) { return r.decision == 1; });
  emit_output(output, [&](std::ostream& os) { write_scores(report, os); });
  std::cerr << "flagged " << flagged << " of " << report.size() << " observations\n";
}

int cmd_score(const Common& c) {
  const Dataset data = load_csv(c.input, label_of(c));
  if (data.size() == 0) throw InvalidInput(c.input + ": no observations");
  const Detector det = fit_detector(data.features, {parse_decimals(c.decimals), c.standardize});
  if (det.neuron.degenerate()) {
    std::cerr << "notice: all inputs sit on the median (S = 0); the neuron never fires\n";
  }
  std::vector<double> scores(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) scores[i] = det.score(data.features.row(i));
  std::cerr << "neuron: median " << det.neuron.median << ", S " << det.neuron.total_deviation
            << ", W " << det.neuron.window_count << " at scale 10^" << det.neuron.scale_decimals
            << "; flagged "
            << std::count_if(scores.begin(), scores.end(), [](double f) { return f > 0.0; })
            << " of " << scores.size() << '\n';
  emit_output(c.output, [&](std::ostream& os) { write_neuron_scores(scores, os); });
  return kOk;
}

int cmd_net_score(const Common& c, const NetFlags& n) {
  const NetworkConfig cfg = make_config(c, n);
  const int threads = resolve_threads(n.threads);
  const Dataset data = load_csv(c.input, label_of(c));
  const NetworkModel net = fit_network(data.features, cfg, threads);
  report_network(net);
  if (!n.model.empty()) save_network(net, n.model);
  write_network_scores(net, data, threads, c.output);
  return kOk;
}

int cmd_fit(const Common& c, const NetFlags& n) {
  const NetworkConfig cfg = make_config(c, n);
  const Dataset data = load_csv(c.input, label_of(c));
  const NetworkModel net = fit_network(data.features, cfg, resolve_threads(n.threads));
  report_network(net);
  save_network(net, n.model);
  return kOk;
}

int cmd_predict(const Common& c, const std::string& model, const std::optional<int>& threads) {
  const NetworkModel net = load_network(model);
  const Dataset data = load_csv(c.input, label_of(c));
  write_network_scores(net, data, resolve_threads(threads), c.output);
  return kOk;
}

std::vector<std::uint64_t> make_seeds(std::size_t count, std::uint64_t first) {
  std::vector<std::uint64_t> seeds(count);
  for (std::size_t i = 0; i < count; ++i) seeds[i] = first + i;
  return seeds;
}

bool header_has(const std::string& path, const std::string& column) {
  std::ifstream in(path);
  if (!in) throw FileNotFound(path);
  std::string line;
  std::getline(in, line);
  for (std::string cell : split_csv_record(line)) {
    cell.erase(0, cell.find_first_not_of(" \t"));
    cell.erase(cell.find_last_not_of(" \t\r") + 1);
    if (cell == column) return true;
  }
  return false;
}

struct BenchFlags {
  std::string data_dir;
  std::vector<std::string> files;
  std::string markdown;
  std::size_t seeds = 10;
  std::vector<std::string> baselines;
  bool single_only = false;
  bool network_only = false;
};

int cmd_bench(const Common& c, const NetFlags& n, const BenchFlags& b) {
  std::vector<std::string> paths = b.files;
  if (!b.data_dir.empty()) {
    if (!fs::is_directory(b.data_dir)) throw FileNotFound(b.data_dir);
    for (const auto& entry : fs::directory_iterator(b.data_dir)) {
      if (entry.path().extension() == ".csv") paths.push_back(entry.path().string());
    }
  }
  if (paths.empty()) throw UsageError("bench needs --data-dir or dataset files");
  std::sort(paths.begin(), paths.end());

  BenchmarkOptions opts;
  opts.network_config = make_config(c, n);
  opts.detector = {parse_decimals(c.decimals), c.standardize};
  opts.threads = resolve_threads(n.threads);
  opts.seeds = make_seeds(b.seeds, n.seed);
  opts.single_neuron = !b.network_only;
  opts.network = !b.single_only;
  for (const std::string& spec : b.baselines) {
    const auto first = spec.find(':');
    const auto second = spec.find(':', first == std::string::npos ? first : first + 1);
    if (first == std::string::npos || second == std::string::npos) {
      throw UsageError("--baseline expects DATASET:METHOD:PATH, got '" + spec + "'");
    }
    opts.baselines.push_back(
        {spec.substr(0, first), spec.substr(first + 1, second - first - 1), spec.substr(second + 1)});
  }

  const std::string label = c.label_col.empty() ? "label" : c.label_col;
  std::vector<Dataset> datasets;
  std::vector<std::string> load_notices;
  for (const auto& p : paths) {
    try {
      datasets.push_back(load_csv(p, header_has(p, label) ? std::optional(label) : std::nullopt));
    } catch (const DataError& e) {
      load_notices.push_back(fs::path(p).stem().string() + ": failed to load, " + e.what());
    }
  }
  EvalReport report = run_benchmark(datasets, opts);
  report.notices.insert(report.notices.begin(), load_notices.begin(), load_notices.end());
  for (const auto& notice : report.notices) std::cerr << "notice: " << notice << '\n';

  emit_output(c.output, [&](std::ostream& os) { write_report_csv(report, os); });
  if (!b.markdown.empty()) {
    emit_output(b.markdown, [&](std::ostream& os) { write_report_markdown(report, os); });
  } else {
    write_report_markdown(report, std::cerr);
  }
  return report.rows.empty() ? kData : kOk;
}

struct SweepFlags {
  std::string kind;
  std::vector<std::size_t> values;
  std::size_t seeds = 10;
  std::optional<double> z_min;
  std::optional<double> z_max;
};

int cmd_sweep(const Common& c, const NetFlags& n, const SweepFlags& s) {
  const NetworkConfig cfg = make_config(c, n);
  const int threads = resolve_threads(n.threads);
  const std::optional<std::string> label =
      s.kind == "curve" ? std::nullopt
                        : std::optional<std::string>(c.label_col.empty() ? "label" : c.label_col);
  Dataset data = load_csv(c.input, label ? label : label_of(c));

  if (s.kind == "curve") {
    const Detector det =
        fit_detector(data.features, {parse_decimals(c.decimals), c.standardize});
    if (det.neuron.degenerate()) {
      throw DegenerateModel("the fitted neuron has S = 0; its score curve is flat");
    }
    std::vector<double> inputs(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) inputs[i] = det.reduce(data.features.row(i));
    const auto [lo_it, hi_it] = std::minmax_element(inputs.begin(), inputs.end());
    const double pad = 0.1 * (*hi_it - *lo_it);
    const ScoreCurve curve =
        emit_score_curve(det.neuron, s.z_min.value_or(*lo_it - pad), s.z_max.value_or(*hi_it + pad));
    std::cerr << "linear beyond [" << curve.lower_boundary << ", " << curve.upper_boundary
              << "]\n";
    emit_output(c.output, [&](std::ostream& os) { write_score_curve_csv(curve, os); });
    return kOk;
  }

  const auto seeds = make_seeds(s.seeds, n.seed);
  std::vector<std::size_t> values = s.values;
  SweepCurve curve;
  if (s.kind == "neurons") {
    if (values.empty()) values = {16, 32, 64, 128, 256};
    curve = sweep_neuron_count(data, values, seeds, cfg, threads);
  } else if (s.kind == "subsample") {
    if (values.empty()) throw UsageError("sweep subsample needs --values");
    curve = sweep_subsample_size(data, values, seeds, cfg, threads);
  } else {
    if (values.empty()) {
      for (std::size_t k = cfg.n_neurons; k >= 1; k /= 2) values.push_back(k);
    }
    curve = sweep_degrade(data, values, seeds, cfg, threads);
  }
  emit_output(c.output, [&](std::ostream& os) { write_curve_csv(curve, os); });
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Parameter-free anomaly detection with perception neurons"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "perception 1.0");

  Common common;
  NetFlags net;
  BenchFlags bench;
  SweepFlags sweep;

  auto* score = app.add_subcommand("score", "Score a CSV with a single neuron");
  add_common(score, common);

  auto* net_score = app.add_subcommand("net-score", "Fit a network and score the same CSV");
  add_common(net_score, common);
  add_net(net_score, net);
  net_score->add_option("--model", net.model, "Also save the fitted network here");

  auto* fit = app.add_subcommand("fit", "Fit a network and save it");
  add_common(fit, common);
  add_net(fit, net);
  fit->add_option("--model", net.model, "Model output path")->required();

  auto* predict_cmd = app.add_subcommand("predict", "Score a CSV with a saved network");
  add_common(predict_cmd, common);
  predict_cmd->add_option("--model", net.model, "Saved network")->required();
  predict_cmd->add_option("--threads", net.threads, "Worker threads")->check(CLI::Range(1, 4096));

  auto* bench_cmd = app.add_subcommand("bench", "Benchmark on labeled CSV datasets");
  add_common(bench_cmd, common, false);
  add_net(bench_cmd, net);
  bench_cmd->add_option("datasets", bench.files, "Labeled CSV files");
  bench_cmd->add_option("--data-dir", bench.data_dir, "Directory of labeled CSV files");
  bench_cmd->add_option("--markdown", bench.markdown, "Markdown summary path (default: stderr)");
  bench_cmd->add_option("--seeds", bench.seeds, "Number of network seeds, starting at --seed")
      ->default_val(10)
      ->check(CLI::PositiveNumber);
  bench_cmd->add_option("--baseline", bench.baselines,
                        "External scores as DATASET:METHOD:PATH (columns index,score[,decision])");
  auto* single_only = bench_cmd->add_flag("--single-only", bench.single_only, "Skip the network");
  bench_cmd->add_flag("--network-only", bench.network_only, "Skip the single neuron")
      ->excludes(single_only);

  auto* sweep_cmd = app.add_subcommand("sweep", "Neuron count, subsample, degrade or curve sweeps");
  sweep_cmd->add_option("kind", sweep.kind, "neurons | subsample | degrade | curve")
      ->required()
      ->check(CLI::IsMember({"neurons", "subsample", "degrade", "curve"}));
  add_common(sweep_cmd, common);
  add_net(sweep_cmd, net);
  sweep_cmd->add_option("--values", sweep.values, "Counts, sizes or keep values to sweep")
      ->delimiter(',');
  sweep_cmd->add_option("--seeds", sweep.seeds, "Number of seeds, starting at --seed")
      ->default_val(10)
      ->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--z-min", sweep.z_min, "Curve range start (default: data range)");
  sweep_cmd->add_option("--z-max", sweep.z_max, "Curve range end");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*score) return cmd_score(common);
    if (*net_score) return cmd_net_score(common, net);
    if (*fit) return cmd_fit(common, net);
    if (*predict_cmd) return cmd_predict(common, net.model, net.threads);
    if (*bench_cmd) return cmd_bench(common, net, bench);
    if (*sweep_cmd) return cmd_sweep(common, net, sweep);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help() << '\n';
    return kUsage;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kData;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kData;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kData;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kData;
  } catch (const DegenerateModel& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kData;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternal;
  }
  return kInternal;
}
