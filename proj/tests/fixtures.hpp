#pragma once

// Fixture data shared by the unit and acceptance tests.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "perception/dataset.hpp"
#include "perception/matrix.hpp"
#include "perception/rng.hpp"

#ifndef PERCEPTION_SOURCE_DIR
#error "PERCEPTION_SOURCE_DIR must point at the repository root"
#endif

namespace fixtures {

inline std::filesystem::path source_dir() { return PERCEPTION_SOURCE_DIR; }
inline std::filesystem::path test_data(const std::string& name) {
  return source_dir() / "tests" / "data" / name;
}

// Directory holding labeled benchmark CSVs (<name>.csv with a `label` column).
inline std::filesystem::path odds_dir() {
  if (const char* env = std::getenv("PERCEPTION_ODDS_DIR"); env && *env) return env;
  return source_dir() / "data" / "odds";
}

inline std::vector<double> galton_heights() {
  const auto ds = perception::load_csv(test_data("galton_heights.csv").string());
  return ds.features.column_values(0);
}

// N integers drawn uniformly from {0..9}.
inline std::vector<double> uniform_digits(std::size_t n, std::uint64_t seed) {
  perception::StreamRng rng(seed, 0);
  std::vector<double> v(n);
  for (auto& x : v) x = static_cast<double>(rng.below(10));
  return v;
}

// Standard normal features rounded to 3 decimals.
inline perception::Matrix gaussian_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  perception::StreamRng rng(seed, 1);
  perception::Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      m(i, j) = std::round(rng.normal(0.0, 1.0) * 1000.0) / 1000.0;
    }
  }
  return m;
}

inline void write_column(const std::filesystem::path& path, const std::string& name,
                         const std::vector<double>& values) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << name << '\n';
  for (double v : values) out << perception::format_score(v) << '\n';
}

}  // namespace fixtures
