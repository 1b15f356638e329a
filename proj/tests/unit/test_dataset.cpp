#include <doctest.h>

#include <sstream>
#include <string>

#include "perception/dataset.hpp"
#include "perception/error.hpp"

using namespace perception;

namespace {

Dataset parse(const std::string& text, std::optional<std::string> label = {}) {
  std::istringstream in(text);
  return parse_csv(in, "inline", label);
}

}  // namespace

TEST_CASE("labeled CSV") {
  const Dataset ds = parse("x,label\n1.5,0\n9.0,1\n", "label");
  CHECK(ds.size() == 2);
  CHECK(ds.features.cols() == 1);
  CHECK(ds.feature_names == std::vector<std::string>{"x"});
  REQUIRE(ds.labeled());
  CHECK(*ds.labels == std::vector<int>{0, 1});
  CHECK(ds.features(1, 0) == 9.0);
}

TEST_CASE("unlabeled CSV keeps every column") {
  const Dataset ds = parse("a,b,label\n1,2,0\n3,4,1\n");
  CHECK_FALSE(ds.labeled());
  CHECK(ds.features.cols() == 3);
}

TEST_CASE("label column may sit anywhere and rows keep their order") {
  const Dataset ds = parse("label,a,b\n1,10,20\n0,11,21\n1,12,22\n", "label");
  CHECK(*ds.labels == std::vector<int>{1, 0, 1});
  CHECK(ds.features.row(2)[0] == 12);
  CHECK(ds.features.row(2)[1] == 22);
}

TEST_CASE("quoting, whitespace, CRLF and blank lines") {
  const Dataset ds = parse("\"a\",\" b \"\r\n\"1.25\", 2 \r\n\r\n-3e2,+4\r\n");
  CHECK(ds.feature_names == std::vector<std::string>{"a", "b"});
  CHECK(ds.size() == 2);
  CHECK(ds.features(0, 0) == 1.25);
  CHECK(ds.features(1, 0) == -300);
  CHECK(ds.features(1, 1) == 4);
  CHECK(split_csv_record("\"x,\"\"y\"\"\",z") == std::vector<std::string>{"x,\"y\"", "z"});
}

TEST_CASE("ingestion is lossless at six decimals") {
  const Dataset ds = parse("v\n0.123456\n-98765.432101\n66.5\n");
  CHECK(ds.features(0, 0) == 0.123456);
  CHECK(ds.features(1, 0) == -98765.432101);
  CHECK(ds.features(2, 0) == 66.5);
}

TEST_CASE("each failure has its own error") {
  CHECK_THROWS_AS(load_csv("/nonexistent/file.csv"), FileNotFound);
  try {
    load_csv("/nonexistent/file.csv");
  } catch (const FileNotFound& e) {
    CHECK(std::string(e.what()).find("/nonexistent/file.csv") != std::string::npos);
  }

  try {
    parse("x\n1\nabc\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.row() == 3);
    CHECK(e.column() == "x");
    CHECK(std::string(e.what()).find("row 3") != std::string::npos);
  }

  CHECK_THROWS_AS(parse("x,label\n1,2\n", "label"), LabelError);
  CHECK_THROWS_AS(parse("x,label\n1,yes\n", "label"), LabelError);
  CHECK_THROWS_AS(parse("x,y\n1,2\n3\n"), RaggedRow);
  CHECK_THROWS_AS(parse("x\nnan\n"), ParseError);
  CHECK_THROWS_AS(parse("x\ninf\n"), ParseError);
  CHECK_THROWS_AS(parse(""), ParseError);
  CHECK_THROWS_AS(parse("x,label\n1,0\n", "y"), ParseError);
  CHECK_THROWS_AS(parse("label\n1\n", "label"), ParseError);
}

TEST_CASE("score reports") {
  ScoreReport report{{0, -41.23456781, -256, 0}, {1, 3.5, 12, 1}, {2, -0.0, 0, 0}};
  std::ostringstream out;
  write_scores(report, out);
  CHECK(out.str() ==
        "index,score_sum,vote_sum,decision\n"
        "0,-41.2345678,-256,0\n"
        "1,3.5,12,1\n"
        "2,0,0,0\n");

  std::istringstream in(out.str());
  const ScoreReport back = read_scores(in);
  REQUIRE(back.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(back[i].index == i);
    CHECK(back[i].vote_sum == report[i].vote_sum);
    CHECK(back[i].decision == report[i].decision);
  }

  std::ostringstream empty;
  write_scores({}, empty);
  CHECK(empty.str() == "index,score_sum,vote_sum,decision\n");
}

TEST_CASE("report rows follow the aggregate outputs") {
  std::vector<AggregateOutput> outs(3);
  outs[1].vote_sum = 5;
  outs[1].decision = Decision::kAnomaly;
  const ScoreReport r = make_score_report(outs);
  CHECK(r.size() == 3);
  CHECK(r[1].decision == 1);
  CHECK(r[2].index == 2);
}

TEST_CASE("single neuron report") {
  std::ostringstream out;
  write_neuron_scores({0.25, -1.0, 0.0}, out);
  CHECK(out.str() == "index,score,decision\n0,0.25,1\n1,-1,0\n2,0,0\n");
}
