#include "perception/dataset.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>

#include "perception/error.hpp"

namespace perception {
namespace {

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

bool parse_double(const std::string& text, double& out) {
  const std::string t = trim(text);
  if (t.empty()) return false;
  const char* begin = t.data();
  if (*begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, t.data() + t.size(), out);
  return ec == std::errc{} && ptr == t.data() + t.size() && std::isfinite(out);
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw DataError("cannot write file: " + path);
  return out;
}

}  // namespace

std::vector<std::string> split_csv_record(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cell.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cell.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      cells.push_back(std::move(cell));
      cell.clear();
    } else if (c != '\r') {
      cell.push_back(c);
    }
  }
  cells.push_back(std::move(cell));
  return cells;
}

Dataset parse_csv(std::istream& in, const std::string& name,
                  const std::optional<std::string>& label_column) {
  Dataset ds;
  ds.name = name;
  std::string line;
  if (!std::getline(in, line)) throw ParseError(1, "", name + ": missing header row");
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
  std::vector<std::string> header = split_csv_record(line);
  for (auto& h : header) h = trim(h);

  std::optional<std::size_t> label_idx;
  if (label_column) {
    for (std::size_t j = 0; j < header.size(); ++j) {
      if (header[j] == *label_column) label_idx = j;
    }
    if (!label_idx) {
      throw ParseError(1, *label_column, name + ": label column '" + *label_column +
                                             "' not found in header");
    }
    ds.labels.emplace();
  }
  for (std::size_t j = 0; j < header.size(); ++j) {
    if (j != label_idx) ds.feature_names.push_back(header[j]);
  }
  if (ds.feature_names.empty()) throw ParseError(1, "", name + ": no feature columns");

  std::vector<double> values;
  values.reserve(ds.feature_names.size());
  std::vector<double> flat;
  std::size_t row_no = 1;
  std::size_t n_rows = 0;
  while (std::getline(in, line)) {
    ++row_no;
    if (trim(line).empty()) continue;
    const std::vector<std::string> cells = split_csv_record(line);
    if (cells.size() != header.size()) {
      throw RaggedRow(row_no, "",
                      name + ": row " + std::to_string(row_no) + " has " +
                          std::to_string(cells.size()) + " cells, header has " +
                          std::to_string(header.size()));
    }
    values.clear();
    for (std::size_t j = 0; j < cells.size(); ++j) {
      double v = 0.0;
      const bool ok = parse_double(cells[j], v);
      if (j == label_idx) {
        if (!ok || (v != 0.0 && v != 1.0)) {
          throw LabelError(row_no, header[j],
                           name + ": row " + std::to_string(row_no) + ", column '" + header[j] +
                               "': label must be 0 or 1, got '" + cells[j] + "'");
        }
        ds.labels->push_back(static_cast<int>(v));
      } else {
        if (!ok) {
          throw ParseError(row_no, header[j],
                           name + ": row " + std::to_string(row_no) + ", column '" +
                               header[j] + "': cannot parse '" + cells[j] +
                               "' as a finite number");
        }
        values.push_back(v);
      }
    }
    flat.insert(flat.end(), values.begin(), values.end());
    ++n_rows;
  }
  ds.features = Matrix(n_rows, ds.feature_names.size(), std::move(flat));
  return ds;
}

Dataset load_csv(const std::string& path, const std::optional<std::string>& label_column) {
  std::ifstream in(path);
  if (!in) throw FileNotFound(path);
  return parse_csv(in, std::filesystem::path(path).stem().string(), label_column);
}

ScoreReport make_score_report(const std::vector<AggregateOutput>& outputs) {
  ScoreReport report;
  report.reserve(outputs.size());
  for (std::size_t i = 0; i < outputs.size(); ++i) {
    report.push_back({i, outputs[i].score_sum, outputs[i].vote_sum,
                      outputs[i].decision == Decision::kAnomaly ? 1 : 0});
  }
  return report;
}

std::string format_score(double value) {
  if (value == 0.0) value = 0.0;
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", value);
  return buf;
}

void write_scores(const ScoreReport& report, std::ostream& out) {
  out << "index,score_sum,vote_sum,decision\n";
  for (const ScoreRow& r : report) {
    out << r.index << ',' << format_score(r.score_sum) << ',' << r.vote_sum << ','
        << r.decision << '\n';
  }
}

void write_scores(const ScoreReport& report, const std::string& path) {
  auto out = open_output(path);
  write_scores(report, out);
  if (!out) throw DataError("failed writing " + path);
}

ScoreReport read_scores(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || trim(line) != "index,score_sum,vote_sum,decision") {
    throw ParseError(1, "", "score report: unexpected header");
  }
  ScoreReport report;
  std::size_t row_no = 1;
  while (std::getline(in, line)) {
    ++row_no;
    if (trim(line).empty()) continue;
    const auto cells = split_csv_record(line);
    if (cells.size() != 4) throw RaggedRow(row_no, "", "score report: ragged row");
    ScoreRow r;
    double idx = 0, score = 0, votes = 0, decision = 0;
    if (!parse_double(cells[0], idx) || !parse_double(cells[1], score) ||
        !parse_double(cells[2], votes) || !parse_double(cells[3], decision)) {
      throw ParseError(row_no, "", "score report: bad number at row " + std::to_string(row_no));
    }
    r.index = static_cast<std::size_t>(idx);
    r.score_sum = score;
    r.vote_sum = static_cast<std::int64_t>(votes);
    r.decision = static_cast<int>(decision);
    report.push_back(r);
  }
  return report;
}

void write_neuron_scores(const std::vector<double>& scores, std::ostream& out) {
  out << "index,score,decision\n";
  for (std::size_t i = 0; i < scores.size(); ++i) {
    out << i << ',' << format_score(scores[i]) << ',' << (scores[i] > 0.0 ? 1 : 0) << '\n';
  }
}

void write_neuron_scores(const std::vector<double>& scores, const std::string& path) {
  auto out = open_output(path);
  write_neuron_scores(scores, out);
  if (!out) throw DataError("failed writing " + path);
}

}  // namespace perception
