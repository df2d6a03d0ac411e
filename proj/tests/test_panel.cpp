#include "samossa/errors.hpp"
#include "samossa/panel.hpp"

#include <doctest.h>

#include <filesystem>
#include <random>

using namespace samossa;

TEST_CASE("wide CSV with header") {
  const auto p = parse_csv("a,b\n1,4\n2,5\n3,6");
  CHECK(p.num_series() == 2);
  CHECK(p.length() == 3);
  CHECK(p.names() == std::vector<std::string>{"a", "b"});
  Eigen::MatrixXd expected(2, 3);
  expected << 1, 2, 3, 4, 5, 6;
  CHECK(p.values() == expected);
  CHECK(p.t0() == 1);
}

TEST_CASE("wide CSV without header gets default names") {
  const auto p = parse_csv("1,4\n2,5\n");
  CHECK(p.names() == std::vector<std::string>{"s1", "s2"});
  CHECK(p(1, 1) == 5.0);
}

TEST_CASE("long CSV triples") {
  const auto p = parse_csv("a,1,1\na,2,2\nb,1,4\nb,2,5\n", CsvLayout::Long);
  CHECK(p.num_series() == 2);
  CHECK(p.length() == 2);
  CHECK(p(0, 1) == 2.0);
  CHECK(p(1, 0) == 4.0);

  const auto with_header = parse_csv("series,t,value\nb,1,4\na,1,1\nb,2,5\na,2,2\n", CsvLayout::Long);
  CHECK(with_header.names() == std::vector<std::string>{"b", "a"});
  CHECK(with_header(1, 1) == 2.0);
}

TEST_CASE("long CSV keeps its time index") {
  const auto p = parse_csv("a,5,1\na,6,2\n", CsvLayout::Long);
  CHECK(p.t0() == 5);
  CHECK(p.t_end() == 6);
}

TEST_CASE("ingestion errors") {
  SUBCASE("non-numeric cell reports its row") {
    try {
      parse_csv("a\n1\nx");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).find("row 3") != std::string::npos);
    }
  }
  SUBCASE("ragged rows") { CHECK_THROWS_AS(parse_csv("a,b\n1,2\n3\n"), IngestError); }
  SUBCASE("missing pair in long layout") {
    CHECK_THROWS_AS(parse_csv("a,1,1\na,2,2\nb,1,4\n", CsvLayout::Long), IngestError);
  }
  SUBCASE("duplicate pair in long layout") {
    CHECK_THROWS_AS(parse_csv("a,1,1\na,1,2\n", CsvLayout::Long), IngestError);
  }
  SUBCASE("non-finite values") { CHECK_THROWS_AS(parse_csv("a\n1\nnan\n"), Error); }
  SUBCASE("empty input") { CHECK_THROWS_AS(parse_csv(""), IngestError); }
  SUBCASE("unknown layout") { CHECK_THROWS_AS(parse_layout("tall"), ParseError); }
  SUBCASE("missing file") { CHECK_THROWS_AS(load_csv("/nonexistent/file.csv"), IngestError); }
}

TEST_CASE("panel invariants") {
  CHECK_THROWS_AS(TimePanel(Eigen::MatrixXd(0, 3)), ShapeError);
  CHECK_THROWS_AS(TimePanel(Eigen::MatrixXd(2, 0)), ShapeError);
  Eigen::MatrixXd bad = Eigen::MatrixXd::Ones(1, 2);
  bad(0, 1) = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(TimePanel{bad}, IngestError);
  CHECK_THROWS_AS(TimePanel({"a"}, Eigen::MatrixXd::Ones(2, 2)), ShapeError);
}

TEST_CASE("split") {
  Eigen::MatrixXd v(1, 10);
  for (int t = 0; t < 10; ++t) v(0, t) = t + 1;
  const TimePanel p(v);

  SUBCASE("lengths and absolute positions") {
    const auto [train, valid, test] = split(p, {6, 8, 10});
    CHECK(train.length() == 6);
    CHECK(valid.length() == 2);
    CHECK(test.length() == 2);
    CHECK(valid.t0() == 7);
    CHECK(test.t0() == 9);
    CHECK(test(0, 0) == 9.0);
  }
  SUBCASE("empty validation window") { CHECK_THROWS_AS(split(p, {10, 10, 10}), SplitError); }
  SUBCASE("boundary case") {
    Eigen::MatrixXd w(1, 3);
    w << 1, 2, 3;
    const auto [a, b, c] = split(TimePanel(w), {1, 2, 3});
    CHECK(a.length() == 1);
    CHECK(b.length() == 1);
    CHECK(c.length() == 1);
  }
  SUBCASE("test_end beyond T") { CHECK_THROWS_AS(split(p, {4, 6, 11}), SplitError); }
  SUBCASE("concatenation reproduces the panel") {
    const auto [train, valid, test] = split(p, {3, 7, 10});
    CHECK(train.append(valid).append(test).values() == p.values());
  }
}

TEST_CASE("slice and append") {
  Eigen::MatrixXd v(2, 5);
  v << 1, 2, 3, 4, 5, 6, 7, 8, 9, 10;
  const TimePanel p(v, 3);
  const auto s = p.slice(1, 4);
  CHECK(s.t0() == 4);
  CHECK(s.length() == 3);
  CHECK(s(1, 0) == 7.0);
  CHECK_THROWS_AS(p.slice(2, 6), IndexError);
  CHECK_THROWS_AS(p.slice(0, 2).append(p.slice(3, 5)), ShapeError);
}

TEST_CASE("CSV round trip is bit-exact") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> d(0.0, 1e3);
  Eigen::MatrixXd v(3, 50);
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = d(rng);
  v(0, 0) = 0.1;
  v(1, 0) = 1e-300;
  v(2, 0) = -123456789012345.0;
  const TimePanel p({"x", "y", "z"}, v);

  for (auto layout : {CsvLayout::Wide, CsvLayout::Long}) {
    const auto back = parse_csv(to_csv(p, layout), layout);
    CHECK(back.values() == p.values());
    CHECK(back.names() == p.names());
  }

  const auto dir = std::filesystem::temp_directory_path() / "samossa_test_panel";
  std::filesystem::create_directories(dir);
  save_csv(p, dir / "p.csv");
  CHECK(load_csv(dir / "p.csv").values() == p.values());
  std::filesystem::remove_all(dir);
}

TEST_CASE("decimal literals survive a round trip") {
  const std::string text = "a,b\n0.1,2.718281828459045\n-3.3,1e-5\n123456.789012345,0\n";
  CHECK(to_csv(parse_csv(text)) == "a,b\n0.1,2.718281828459045\n-3.3,1e-05\n123456.789012345,0\n");
  CHECK(parse_csv(to_csv(parse_csv(text))).values() == parse_csv(text).values());
}

TEST_CASE("format_double is shortest round trip") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1.0) == "1");
  CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
}
