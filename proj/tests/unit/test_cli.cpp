#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include "../fixtures.hpp"
#include "perception/dataset.hpp"
#include "perception/network.hpp"

#ifndef PERCEPTION_CLI_PATH
#error "PERCEPTION_CLI_PATH must name the CLI binary"
#endif

namespace fs = std::filesystem;
using namespace perception;

namespace {

struct Sandbox {
  fs::path dir;
  Sandbox() {
    dir = fs::temp_directory_path() / ("perception_cli_" + std::to_string(::getpid()));
    fs::create_directories(dir);
  }
  ~Sandbox() { fs::remove_all(dir); }
  std::string operator/(const std::string& name) const { return (dir / name).string(); }
};

int run(const std::string& args, const std::string& err_path = "/dev/null",
        const std::string& env = "") {
  const std::string cmd =
      env + " " + PERCEPTION_CLI_PATH + " " + args + " >/dev/null 2>" + err_path;
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string galton() { return fixtures::test_data("galton_heights.csv").string(); }

}  // namespace

TEST_CASE("score flags the masked-free height set") {
  Sandbox box;
  REQUIRE(run("score " + galton() + " --decimals 1 -o " + (box / "s.csv")) == 0);
  const Dataset out = load_csv(box / "s.csv");
  const auto h = fixtures::galton_heights();
  std::set<double> flagged;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (out.features(i, 2) == 1) flagged.insert(h[i]);
  }
  CHECK(flagged == std::set<double>{56, 57, 57.5, 76, 76.5, 78, 79});
}

TEST_CASE("constant input reports degeneracy and flags nothing") {
  Sandbox box;
  fixtures::write_column(box.dir / "c.csv", "x", std::vector<double>(20, 3.0));
  REQUIRE(run("score " + (box / "c.csv") + " -o " + (box / "s.csv"), box / "err.txt") == 0);
  CHECK(slurp(box / "err.txt").find("S = 0") != std::string::npos);
  const Dataset out = load_csv(box / "s.csv");
  for (std::size_t i = 0; i < out.size(); ++i) CHECK(out.features(i, 2) == 0);
}

TEST_CASE("exit codes") {
  Sandbox box;
  CHECK(run("score /no/such/file.csv", box / "err.txt") == 2);
  CHECK(slurp(box / "err.txt").find("/no/such/file.csv") != std::string::npos);

  CHECK(run("score " + galton() + " --bogus -o " + (box / "u.csv")) == 1);
  CHECK(run("score " + galton() + " --decimals 9 -o " + (box / "u.csv")) == 1);
  CHECK(run("net-score " + galton() + " --neurons 0 -o " + (box / "u.csv")) == 1);
  CHECK(run("net-score " + galton() + " -o " + (box / "u.csv"), "/dev/null",
            "PERCEPTION_NET_THREADS=abc") == 1);
  CHECK(run("") == 1);
  CHECK_FALSE(fs::exists(box / "u.csv"));

  std::ofstream(box / "bad.csv") << "x\n1\nabc\n";
  CHECK(run("score " + (box / "bad.csv"), box / "err.txt") == 2);
  CHECK(slurp(box / "err.txt").find("row 3") != std::string::npos);

  std::ofstream(box / "bad.bin") << "not a model";
  CHECK(run("predict " + galton() + " --model " + (box / "bad.bin")) == 2);
  CHECK(run("net-score " + galton() + " --fixed-subsample 5000") == 2);
}

TEST_CASE("net-score output is reproducible and thread independent") {
  Sandbox box;
  REQUIRE(run("net-score " + galton() + " --seed 7 --threads 1 -o " + (box / "a.csv")) == 0);
  REQUIRE(run("net-score " + galton() + " --seed 7 --threads 1 -o " + (box / "b.csv")) == 0);
  REQUIRE(run("net-score " + galton() + " --seed 7 --threads 3 -o " + (box / "c.csv")) == 0);
  REQUIRE(run("net-score " + galton() + " --seed 7 -o " + (box / "d.csv"), "/dev/null",
              "PERCEPTION_NET_THREADS=2") == 0);
  REQUIRE(run("net-score " + galton() + " --seed 8 -o " + (box / "e.csv")) == 0);
  const std::string a = slurp(box / "a.csv");
  CHECK(a == slurp(box / "b.csv"));
  CHECK(a == slurp(box / "c.csv"));
  CHECK(a == slurp(box / "d.csv"));
  CHECK(a != slurp(box / "e.csv"));
}

TEST_CASE("a one-neuron network reproduces train_neuron") {
  Sandbox box;
  REQUIRE(run("net-score " + galton() + " --neurons 1 --seed 3 -o " + (box / "one.csv")) == 0);
  std::ifstream in(box / "one.csv");
  const ScoreReport report = read_scores(in);

  const Matrix data = Matrix::column(fixtures::galton_heights());
  NetworkConfig cfg;
  cfg.n_neurons = 1;
  cfg.seed = 3;
  const auto draw = draw_subsample(0, data.rows(), cfg);
  const TrainedNeuron t = train_neuron(data, draw.indices, 1, false);
  REQUIRE(report.size() == data.rows());
  for (std::size_t i = 0; i < data.rows(); ++i) {
    const int expected = t.detector.decide(data.row(i)) == Decision::kAnomaly;
    REQUIRE(report[i].decision == expected);
    REQUIRE(report[i].vote_sum == (expected ? 1 : -1));
  }
}

TEST_CASE("fit then predict matches net-score") {
  Sandbox box;
  REQUIRE(run("net-score " + galton() + " --seed 5 -o " + (box / "direct.csv") + " --model " +
              (box / "m1.bin")) == 0);
  REQUIRE(run("fit " + galton() + " --seed 5 --model " + (box / "m2.bin")) == 0);
  REQUIRE(run("predict " + galton() + " --model " + (box / "m2.bin") + " -o " +
              (box / "via_model.csv")) == 0);
  CHECK(slurp(box / "direct.csv") == slurp(box / "via_model.csv"));
  CHECK(slurp(box / "m1.bin") == slurp(box / "m2.bin"));
}

TEST_CASE("bench and sweeps write their tables") {
  Sandbox box;
  fs::create_directories(box.dir / "sets");
  {
    std::ofstream out(box.dir / "sets" / "toy.csv");
    out << "x,y,label\n";
    for (int i = 0; i < 200; ++i) out << (i % 17) << ',' << (i % 13) << ",0\n";
    out << "90,95,1\n80,99,1\n";
  }
  std::ofstream(box.dir / "sets" / "plain.csv") << "x\n1\n2\n";
  REQUIRE(run("bench --data-dir " + (box / "sets") + " --seeds 2 --neurons 16 -o " +
                  (box / "r.csv") + " --markdown " + (box / "r.md"),
              box / "err.txt") == 0);
  const std::string csv = slurp(box / "r.csv");
  CHECK(csv.find("toy,single_neuron,") != std::string::npos);
  CHECK(csv.find("toy,network,1,") != std::string::npos);
  CHECK(slurp(box / "r.md").find("| toy |") != std::string::npos);
  CHECK(slurp(box / "err.txt").find("plain: skipped") != std::string::npos);

  const std::string toy = box / "sets/toy.csv";
  REQUIRE(run("sweep neurons " + toy + " --values 4,16 --seeds 2 -o " + (box / "n.csv")) == 0);
  CHECK(slurp(box / "n.csv").rfind("x,y_mean,y_std\n4,", 0) == 0);
  REQUIRE(run("sweep subsample " + toy + " --values 20,50 --seeds 2 --neurons 8 -o " +
              (box / "s.csv")) == 0);
  REQUIRE(run("sweep degrade " + toy + " --values 4,16 --neurons 16 --seeds 2 -o " +
              (box / "d.csv")) == 0);
  REQUIRE(run("sweep curve " + galton() + " --z-min 60 --z-max 2800 -o " + (box / "c.csv")) == 0);
  CHECK(slurp(box / "c.csv").find(",0,linear") != std::string::npos);
  CHECK(run("sweep subsample " + toy + " --values 500 --seeds 1") == 2);
  CHECK(run("sweep bogus " + toy) == 1);
}
