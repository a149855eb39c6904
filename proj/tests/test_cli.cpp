#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "../tools/cli.hpp"
#include "rtn/closed_forms.hpp"
#include "rtn/oracle.hpp"

using namespace rtncli;

namespace {

ParseOutcome parse(std::vector<std::string> args, RunManifest& m, std::string* err_text = nullptr) {
  std::vector<const char*> argv;
  argv.push_back("rtn");
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream err;
  const ParseOutcome out = parse_args(static_cast<int>(argv.size()), argv.data(), m, err);
  if (err_text) *err_text = err.str();
  return out;
}

struct RunCapture {
  int exit_code = 0;
  std::string text;
};

RunCapture run(const RunManifest& m) {
  std::ostringstream out, err;
  RunCapture c;
  c.exit_code = run_manifest(m, out, err);
  c.text = out.str();
  return c;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(cell);
  return cells;
}

// strips the wall-time column so byte-level comparisons are meaningful
std::string without_wall(const std::string& text, int wall_col) {
  std::string out;
  for (const auto& line : lines_of(text)) {
    if (!line.empty() && line[0] != '#') {
      auto cells = split_csv(line);
      if (wall_col < static_cast<int>(cells.size())) cells[wall_col] = "-";
      std::string joined;
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) joined += ',';
        joined += cells[i];
      }
      out += joined;
    } else {
      out += line;
    }
    out += '\n';
  }
  return out;
}

}  // namespace

TEST_CASE("argument parsing fills the manifest") {
  SUBCASE("ipr with ranges and channels") {
    RunManifest m;
    const ParseOutcome o = parse({"ipr", "--ensemble", "unitary", "-k", "2", "-d", "2", "-N",
                                  "4,8", "-t", "2..5", "--channels", "id,dep:0.1", "--seed",
                                  "99", "--chi", "8"},
                                 m);
    REQUIRE(o.proceed);
    CHECK(m.command == Command::ipr);
    CHECK(m.n_list == std::vector<int>{4, 8});
    CHECK(m.t_lo == 2);
    CHECK(m.t_hi == 5);
    REQUIRE(m.channel_specs.size() == 2);
    CHECK(m.channel_specs[1] == "dep:0.1");
    CHECK(m.seed == 99);
    CHECK(m.chi == 8);
  }
  SUBCASE("purity region is one-based inclusive on the command line") {
    RunManifest m;
    const ParseOutcome o = parse({"purity", "-d", "2", "-N", "8", "-t", "3", "--region", "1..4"},
                                 m);
    REQUIRE(o.proceed);
    CHECK(m.region_set);
    CHECK(m.region_lo == 0);
    CHECK(m.region_hi == 4);
  }
  SUBCASE("single depth") {
    RunManifest m;
    const ParseOutcome o = parse({"coherence", "-d", "2", "-N", "4", "-t", "7"}, m);
    REQUIRE(o.proceed);
    CHECK(m.t_lo == 7);
    CHECK(m.t_hi == 7);
  }
  SUBCASE("oracle options") {
    RunManifest m;
    const ParseOutcome o = parse({"oracle", "--method", "mc", "--observable", "purity", "-d",
                                  "2", "-N", "4", "-t", "2", "--region", "1..2", "--samples",
                                  "250", "--p", "0.2"},
                                 m);
    REQUIRE(o.proceed);
    CHECK(m.command == Command::oracle);
    CHECK(m.method == "mc");
    CHECK(m.observable == "purity");
    CHECK(m.n_samples == 250);
    CHECK(m.p == doctest::Approx(0.2));
  }
  SUBCASE("bad arguments do not proceed") {
    RunManifest m;
    const ParseOutcome o = parse({"ipr", "-N", "4", "-t", "5..2"}, m);
    CHECK(!o.proceed);
    CHECK(o.exit_code == 2);
  }
  SUBCASE("help exits zero") {
    RunManifest m;
    const ParseOutcome o = parse({"--help"}, m);
    CHECK(!o.proceed);
    CHECK(o.exit_code == 0);
  }
}

TEST_CASE("csv output carries the schema, ordering and references") {
  RunManifest m;
  REQUIRE(parse({"ipr", "-d", "2", "-N", "4,2", "-t", "1..3"}, m).proceed);
  const RunCapture c = run(m);
  CHECK(c.exit_code == 0);
  const auto lines = lines_of(c.text);
  REQUIRE(lines.size() >= 2 + 6);
  CHECK(lines[0] == "# schema: rtn.results.v1");
  CHECK(lines[1].substr(0, 22) == "ensemble,k,d,N,t,value");

  // rows sorted by (ensemble, k, d, N, t): N=2 rows precede N=4 rows
  const auto first = split_csv(lines[2]);
  CHECK(first[0] == "unitary");
  CHECK(first[3] == "2");
  CHECK(first[4] == "1");
  const auto last = split_csv(lines.back());
  CHECK(last[3] == "4");
  CHECK(last[4] == "3");

  // N=2, t=1 row: value = 2/(D+1) with D=4, reference equal, deviation ~ 0
  const double value = std::stod(first[5]);
  CHECK(value == doctest::Approx(0.4).epsilon(1e-12));
  const double reference = std::stod(first[7]);
  CHECK(reference == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(std::abs(std::stod(first[8])) < 1e-12);
  // 17 significant digits survive the round trip
  CHECK(std::stod(first[5]) == value);
}

TEST_CASE("output is byte-deterministic apart from wall time") {
  RunManifest m;
  REQUIRE(parse({"purity", "-d", "2", "-N", "6", "-t", "1..4", "--seed", "7"}, m).proceed);
  const RunCapture a = run(m);
  const RunCapture b = run(m);
  CHECK(a.exit_code == 0);
  CHECK(without_wall(a.text, 11) == without_wall(b.text, 11));
  CHECK(a.text.find("nan") == std::string::npos);
}

TEST_CASE("purity rows reference the random-walk closed form when it applies") {
  RunManifest m;
  REQUIRE(parse({"purity", "-d", "2", "-N", "8", "-t", "2..3"}, m).proceed);
  const RunCapture c = run(m);
  const auto lines = lines_of(c.text);
  REQUIRE(lines.size() == 2 + 2);
  const auto row_t2 = split_csv(lines[2]);
  const double ref = std::stod(row_t2[7]);
  CHECK(ref == doctest::Approx(rtn::rw_purity(8, 4, 2, 2)).epsilon(1e-13));
  const double value = std::stod(row_t2[5]);
  CHECK(std::abs(value - ref) < 1e-8 * ref);
}

TEST_CASE("coherence rows store the log-scale value in both columns") {
  RunManifest m;
  REQUIRE(parse({"coherence", "-d", "2", "-N", "2", "-t", "1"}, m).proceed);
  const RunCapture c = run(m);
  const auto row = split_csv(lines_of(c.text)[2]);
  const double value = std::stod(row[5]);
  const double log_value = std::stod(row[6]);
  CHECK(value == log_value);
  CHECK(value == doctest::Approx(std::log(2.5)).epsilon(1e-12));
}

TEST_CASE("xeb rows reference the clean plateau") {
  RunManifest m;
  REQUIRE(parse({"xeb", "-d", "2", "-N", "2", "-t", "1", "--device", "id"}, m).proceed);
  const RunCapture c = run(m);
  const auto row = split_csv(lines_of(c.text)[2]);
  CHECK(std::stod(row[5]) == doctest::Approx(0.6).epsilon(1e-12));
  // plateau reference (D-1)/(D+1) at D=4
  CHECK(std::stod(row[7]) == doctest::Approx(0.6).epsilon(1e-12));
}

TEST_CASE("json output parses and mirrors the csv values") {
  RunManifest m;
  REQUIRE(parse({"ipr", "-d", "2", "-N", "2", "-t", "1..2", "--format", "json"}, m).proceed);
  const RunCapture c = run(m);
  CHECK(c.exit_code == 0);
  const nlohmann::json j = nlohmann::json::parse(c.text);
  CHECK(j.at("schema") == "rtn.results.v1");
  const auto& rows = j.at("rows");
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].at("ensemble") == "unitary");
  CHECK(rows[0].at("N") == 2);
  CHECK(rows[0].at("t") == 1);
  CHECK(rows[0].at("value").get<double>() == doctest::Approx(0.4).epsilon(1e-12));
}

TEST_CASE("oracle rows carry sampling columns") {
  SUBCASE("dense method reports zero samples") {
    RunManifest m;
    REQUIRE(parse({"oracle", "--method", "dense", "--observable", "ipr", "-d", "2", "-N", "4",
                   "-t", "2"},
                  m)
                .proceed);
    const RunCapture c = run(m);
    CHECK(c.exit_code == 0);
    const auto lines = lines_of(c.text);
    CHECK(lines[1].find("n_samples") != std::string::npos);
    CHECK(lines[1].find("std_error") != std::string::npos);
    const auto row = split_csv(lines[2]);
    CHECK(row[13] == "0");
  }
  SUBCASE("mc method reports samples and errors") {
    RunManifest m;
    REQUIRE(parse({"oracle", "--method", "mc", "--observable", "ipr", "-d", "2", "-N", "4",
                   "-t", "2", "--samples", "200", "--seed", "5"},
                  m)
                .proceed);
    const RunCapture c = run(m);
    CHECK(c.exit_code == 0);
    const auto row = split_csv(lines_of(c.text)[2]);
    CHECK(row[13] == "200");
    CHECK(std::stod(row[14]) > 0.0);
  }
}

TEST_CASE("reduce-bench emits tagged full and reduced rows") {
  RunManifest m;
  REQUIRE(parse({"reduce-bench", "-k", "3", "-d", "2", "-N", "4", "-t", "2"}, m).proceed);
  const RunCapture c = run(m);
  CHECK(c.exit_code == 0);
  const auto lines = lines_of(c.text);
  REQUIRE(lines.size() == 2 + 2);
  const auto full = split_csv(lines[2]);
  const auto red = split_csv(lines[3]);
  CHECK(full[0] == "unitary");
  CHECK(red[0] == "unitary:reduced");
  // the reduced row cites the full value as its reference
  CHECK(std::stod(red[7]) == doctest::Approx(std::stod(full[5])).epsilon(1e-15));
  CHECK(std::abs(std::stod(red[5]) - std::stod(full[5])) < 1e-9 * std::stod(full[5]));
}

TEST_CASE("invalid manifests exit 2 before any file is written") {
  RunManifest m;
  REQUIRE(parse({"ipr", "-d", "2", "-N", "3", "-t", "1"}, m).proceed);  // odd N
  m.output = "/tmp/rtn_cli_should_not_exist.csv";
  std::remove(m.output.c_str());
  std::ostringstream out, err;
  const int code = run_manifest(m, out, err);
  CHECK(code == 2);
  std::ifstream probe(m.output);
  CHECK(!probe.good());
}

TEST_CASE("runtime failures emit nan rows and exit 3") {
  RunManifest m;
  // dense oracle above the component cap: k=4 at N=8 needs 24^8 components
  REQUIRE(parse({"oracle", "--method", "dense", "--observable", "ipr", "--ensemble", "unitary",
                 "-k", "4", "-d", "2", "-N", "8", "-t", "2"},
                m)
              .proceed);
  const RunCapture c = run(m);
  CHECK(c.exit_code == 3);
  const auto lines = lines_of(c.text);
  REQUIRE(lines.size() >= 3);
  CHECK(lines[2].find("nan") != std::string::npos);
}

TEST_CASE("rows can be written to a file") {
  RunManifest m;
  REQUIRE(parse({"ipr", "-d", "2", "-N", "2", "-t", "1", "--output", "/tmp/rtn_cli_rows.csv"},
                m)
              .proceed);
  std::ostringstream out, err;
  const int code = run_manifest(m, out, err);
  CHECK(code == 0);
  CHECK(out.str().empty());
  std::ifstream in("/tmp/rtn_cli_rows.csv");
  REQUIRE(in.good());
  std::string first;
  std::getline(in, first);
  CHECK(first == "# schema: rtn.results.v1");
  std::remove("/tmp/rtn_cli_rows.csv");
}
