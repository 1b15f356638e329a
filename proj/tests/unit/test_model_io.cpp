#include <doctest.h>

#include <filesystem>
#include <vector>

#include "../fixtures.hpp"
#include "perception/error.hpp"
#include "perception/model_io.hpp"

using namespace perception;

namespace {

NetworkModel sample_network(bool multivariate, bool standardize) {
  NetworkConfig cfg;
  cfg.n_neurons = 12;
  cfg.seed = 0xABCDEF0123456789ULL;
  cfg.standardize = standardize;
  cfg.subsample_max = 300;
  if (multivariate) return fit_network(fixtures::gaussian_matrix(400, 3, 5), cfg);
  std::vector<double> h = fixtures::galton_heights();
  h.push_back(700);
  return fit_network(Matrix::column(h), cfg);
}

}  // namespace

TEST_CASE("networks round-trip bit-exactly") {
  for (bool multi : {false, true}) {
    for (bool standardize : {false, true}) {
      const NetworkModel net = sample_network(multi, standardize);
      const auto bytes = serialize_network(net);
      const NetworkModel back = deserialize_network(bytes);
      CHECK(back == net);
      CHECK(serialize_network(back) == bytes);
    }
  }
}

TEST_CASE("the header is little-endian with a magic string") {
  const auto bytes = serialize_network(sample_network(false, false));
  REQUIRE(bytes.size() > 16);
  CHECK(std::string(bytes.begin(), bytes.begin() + 7) == "PRCPNET");
  CHECK(bytes[7] == 0);
  CHECK(bytes[8] == kModelFormatVersion);
  CHECK(bytes[9] == 0);
  CHECK(bytes[10] == 0);
  CHECK(bytes[11] == 0);
  // Seed follows the version and flags words.
  CHECK(bytes[16] == 0x89);
  CHECK(bytes[23] == 0xAB);
}

TEST_CASE("corrupt model files are rejected") {
  const auto good = serialize_network(sample_network(true, false));

  auto bad_magic = good;
  bad_magic[0] = 'X';
  CHECK_THROWS_AS(deserialize_network(bad_magic), ModelFormatError);

  auto bad_version = good;
  bad_version[8] = 99;
  CHECK_THROWS_AS(deserialize_network(bad_version), ModelFormatError);

  for (std::size_t cut : {std::size_t{0}, std::size_t{5}, std::size_t{40}, good.size() - 1}) {
    const std::vector<std::uint8_t> truncated(good.begin(), good.begin() + cut);
    CHECK_THROWS_AS(deserialize_network(truncated), ModelFormatError);
  }

  auto trailing = good;
  trailing.push_back(0);
  CHECK_THROWS_AS(deserialize_network(trailing), ModelFormatError);
}

TEST_CASE("save and load through a file") {
  const NetworkModel net = sample_network(false, false);
  const auto path = std::filesystem::temp_directory_path() / "perception_model_io_test.bin";
  save_network(net, path.string());
  CHECK(load_network(path.string()) == net);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(load_network(path.string()), FileNotFound);
}
