#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "perception/matrix.hpp"
#include "perception/network.hpp"

namespace perception {

struct Dataset {
  std::string name;
  std::vector<std::string> feature_names;
  Matrix features;
  std::optional<std::vector<int>> labels;  // 1 = anomaly

  std::size_t size() const { return features.rows(); }
  bool labeled() const { return labels.has_value(); }
};

// Header row required, comma separated, optional double quotes around cells.
// All feature cells must be finite reals; label cells 0 or 1. The label
// column, when named, is removed from the feature matrix.
Dataset load_csv(const std::string& path, const std::optional<std::string>& label_column = {});
Dataset parse_csv(std::istream& in, const std::string& name,
                  const std::optional<std::string>& label_column = {});

// Splits one CSV record. Exposed for reuse by the report readers.
std::vector<std::string> split_csv_record(const std::string& line);

struct ScoreRow {
  std::size_t index = 0;
  double score_sum = 0.0;
  std::int64_t vote_sum = 0;
  int decision = 0;
};

using ScoreReport = std::vector<ScoreRow>;

ScoreReport make_score_report(const std::vector<AggregateOutput>& outputs);

// "%.9g" with negative zero printed as 0.
std::string format_score(double value);

// Header `index,score_sum,vote_sum,decision`, one row per observation.
void write_scores(const ScoreReport& report, std::ostream& out);
void write_scores(const ScoreReport& report, const std::string& path);
ScoreReport read_scores(std::istream& in);

// Single-neuron output: `index,score,decision`.
void write_neuron_scores(const std::vector<double>& scores, std::ostream& out);
void write_neuron_scores(const std::vector<double>& scores, const std::string& path);

}  // namespace perception
