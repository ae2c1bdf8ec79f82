#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "mpmd/errors.hpp"
#include "mpmd/harness.hpp"

using namespace mpmd;
using namespace mpmd::harness;
using nlohmann::json;

namespace {

const std::filesystem::path kFixtures = MPMD_FIXTURE_DIR;

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("mpmd_test_" + name);
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  return json::parse(in);
}

std::vector<std::vector<std::string>> csv_rows(const std::string& csv) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(csv);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ls(line);
    while (std::getline(ls, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    rows.push_back(fields);
  }
  return rows;
}

}  // namespace

TEST_CASE("solve fixtures match their hand-derived totals") {
  std::ostringstream err;
  const auto out = temp_file("size.json");
  REQUIRE(cmd_solve({kFixtures / "size_line4.json", "nonclairvoyant", out}, err) == kExitOk);
  const json size = read_json(out);
  CHECK(size["solution"]["total"].get<double>() == doctest::Approx(3.0));
  CHECK(size["verification"]["ok"].get<bool>());

  const auto out2 = temp_file("concave.json");
  REQUIRE(cmd_solve({kFixtures / "concave_pair.json", "concave", out2}, err) == kExitOk);
  const json concave = read_json(out2);
  CHECK(concave["solution"]["total"].get<double>() == doctest::Approx(2.0));
  CHECK(concave["dual"]["dual_objective"].get<double>() == doctest::Approx(2.0));
}

TEST_CASE("solve rejects bad input with exit code 2") {
  const auto out = temp_file("bad.json");
  {
    std::ostringstream err;
    CHECK(cmd_solve({kFixtures / "malformed.json", "nonclairvoyant", out}, err) == kExitUsage);
  }
  {
    std::ostringstream err;
    CHECK(cmd_solve({kFixtures / "odd.json", "nonclairvoyant", out}, err) == kExitUsage);
    CHECK(err.str().find("perfect matching impossible") != std::string::npos);
  }
  {
    std::ostringstream err;
    CHECK(cmd_solve({kFixtures / "size_line4.json", "concave", out}, err) == kExitUsage);
  }
  {
    std::ostringstream err;
    CHECK(cmd_solve({kFixtures / "size_line4.json", "magic", out}, err) == kExitUsage);
  }
  {
    std::ostringstream err;
    CHECK(cmd_solve({kFixtures / "missing.json", "nonclairvoyant", out}, err) == kExitUsage);
  }
}

TEST_CASE("size-based sweep is verified, finite and deterministic") {
  const json config = {
      {"seed", 9},
      {"threads", 2},
      {"sweeps", {{{"generator", "size_based"}, {"m", {4}}, {"n", 4}, {"horizon", 6}, {"trials", 20}}}}};
  const RatioTable a = run_ratio(config);
  json serial = config;
  serial["threads"] = 1;
  const RatioTable b = run_ratio(serial);
  CHECK(a.csv() == b.csv());
  REQUIRE(a.rows.size() == 20);
  for (const RatioRow& r : a.rows) {
    CHECK(r.verified);
    CHECK(r.ratio != "inf");
    CHECK(r.ratio != "NA");
    CHECK(r.runtime_ms.empty());
  }
  const auto rows = csv_rows(a.csv());
  CHECK(rows.front().size() == 10);
  CHECK(rows[rows.size() - 2][0] == "summary_max");
  CHECK(rows.back()[0] == "summary_geomean");
}

TEST_CASE("concave sweep stays within 8m") {
  const json config = {{"seed", 4},
                       {"sweeps",
                        {{{"generator", "concave"},
                          {"m", {2, 4, 6, 8}},
                          {"n", 5},
                          {"trials", 5},
                          {"f", {{"family", "log"}, {"c", 1.0}}}}}}};
  const RatioTable t = run_ratio(config);
  REQUIRE(t.rows.size() == 20);
  for (const RatioRow& r : t.rows) {
    CHECK(r.verified);
    CHECK(std::stod(r.ratio) <= 8.0 * static_cast<double>(r.m));
  }
}

TEST_CASE("deterministic phase sweep has ratio n - 1") {
  const json config = {{"sweeps", {{{"generator", "det_phase"}, {"n", {3, 4, 5, 6}}, {"algos", {"greedy"}}}}}};
  const RatioTable t = run_ratio(config);
  REQUIRE(t.rows.size() == 4);
  for (const RatioRow& r : t.rows) CHECK(std::stod(r.ratio) == static_cast<double>(r.n - 1));
}

TEST_CASE("oracle limits mark opt as NA") {
  const json config = {{"sweeps", {{{"generator", "concave"}, {"m", {18}}, {"n", 5}, {"trials", 1}}}}};
  const RatioTable t = run_ratio(config);
  REQUIRE(t.rows.size() == 1);
  CHECK(t.rows[0].opt_cost == "NA");
  CHECK(t.rows[0].ratio == "NA");
}

TEST_CASE("bad ratio configs are usage errors") {
  CHECK_THROWS_AS(run_ratio(json::object()), ValidationError);
  CHECK_THROWS_AS(run_ratio({{"sweeps", {{{"generator", "nope"}, {"m", 4}}}}}), ValidationError);
}

TEST_CASE("adversary command") {
  AdversaryOptions det;
  det.kind = "det_phase";
  det.n = 6;
  const AdversarySummary s = run_adversary(det, nullptr);
  CHECK(s.mean_alg_cost == 5.0);
  const auto rows = csv_rows(s.csv);
  CHECK(rows[0] == std::vector<std::string>{"n", "mode", "seed", "alg_cost", "opt_cost", "ratio"});
  CHECK(rows[1][5] == "5");

  AdversaryOptions rnd;
  rnd.kind = "rand_phase";
  rnd.n = 5;
  rnd.trials = 30;
  rnd.algo = "greedy";
  rnd.seed = 7;
  const AdversarySummary r1 = run_adversary(rnd, nullptr);
  const AdversarySummary r2 = run_adversary(rnd, nullptr);
  CHECK(r1.csv == r2.csv);
  CHECK(r1.reference == doctest::Approx(2.0 * (1.0 / 2 + 1.0 / 3 + 1.0 / 4 + 1.0 / 5)));
  CHECK(r1.standard_error > 0.0);

  AdversaryOptions bad;
  bad.kind = "zigzag";
  std::ostringstream out;
  std::ostringstream err;
  CHECK(cmd_adversary(bad, out, err) == kExitUsage);
}
