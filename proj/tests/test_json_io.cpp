#include "capvc/errors.hpp"
#include "capvc/json_io.hpp"
#include "capvc/oracle.hpp"
#include "capvc/rounding.hpp"
#include "capvc/verify.hpp"

#include <doctest.h>

#include <filesystem>

#include "support/fixtures.hpp"

using namespace capvc;

namespace {

Solution sample_solution() {
  Solution sol;
  sol.x = {{1, 1}, {2, 0}, {3, 2}};
  sol.h[{1, 1}] = Rat(2, 3);
  sol.h[{1, 3}] = Rat(1, 3);
  sol.h[{2, 3}] = Rat(1);
  sol.objective = 3;
  sol.lp_root_objective = Rat(7, 4);
  sol.ratio = Rat(12, 7);
  return sol;
}

} // namespace

TEST_CASE("solutions survive a round trip exactly") {
  Solution sol = sample_solution();
  Solution back = solution_from_json(solution_to_json(sol));
  CHECK(back.x == sol.x);
  CHECK(back.h == sol.h);
  CHECK(back.objective == sol.objective);
  CHECK(back.lp_root_objective == sol.lp_root_objective);
  CHECK(back.ratio == sol.ratio);

  // the same through the text form
  Solution again = solution_from_json(Json::parse(dump_json(solution_to_json(sol))));
  CHECK(again.h.at({1, 1}) == Rat(2, 3));
  CHECK(again.ratio == Rat(12, 7));
}

TEST_CASE("bad solution shapes raise") {
  Json good = solution_to_json(sample_solution());

  CHECK_THROWS_AS(solution_from_json(Json::array()), ParseError);

  for (const char* key : {"x", "h", "objective", "lp_root_objective", "ratio"}) {
    Json j = good;
    j.erase(key);
    CHECK_THROWS_AS(solution_from_json(j), ParseError);
  }

  Json j = good;
  j["x"] = Json::array();
  CHECK_THROWS_AS(solution_from_json(j), ParseError);

  j = good;
  j["x"]["bogus"] = 1;
  CHECK_THROWS_AS(solution_from_json(j), ParseError);

  j = good;
  j["x"]["1"] = 1.5;
  CHECK_THROWS_AS(solution_from_json(j), ParseError);

  j = good;
  j["objective"] = 2.5;
  CHECK_THROWS_AS(solution_from_json(j), ParseError);

  j = good;
  j["ratio"] = 0.5; // floats are banned, rationals travel as strings
  CHECK_THROWS_AS(solution_from_json(j), ParseError);

  j = good;
  j["lp_root_objective"] = "7.5/4";
  CHECK_THROWS_AS(solution_from_json(j), ParseError);

  j = good;
  j["h"] = Json::array({Json::array({1, 1})});
  CHECK_THROWS_AS(solution_from_json(j), ParseError);

  j = good;
  j["h"] = Json::array({Json::array({1, 1, "1/2"}), Json::array({1, 1, "1/2"})});
  CHECK_THROWS_AS(solution_from_json(j), ParseError);
}

TEST_CASE("solution bytes are stable") {
  Instance inst = fixtures::make(fixtures::kTwoVertexText);
  auto [sol, trace] = run(inst);
  const char* golden = R"({
  "x": {
    "1": 1,
    "2": 0
  },
  "h": [
    [
      1,
      1,
      "1"
    ]
  ],
  "objective": 1,
  "lp_root_objective": "1",
  "ratio": "1"
})";
  CHECK(dump_json(solution_to_json(sol)) == std::string(golden) + "\n");
}

TEST_CASE("dump format is two-space indent with trailing newline") {
  CHECK(dump_json(Json::object()) == "{}\n");
  Json j = Json::object();
  j["a"] = Json::array({1, 2});
  CHECK(dump_json(j) == "{\n  \"a\": [\n    1,\n    2\n  ]\n}\n");
}

TEST_CASE("trace serialization carries the fold history") {
  Instance inst = fixtures::make(fixtures::kTwoVertexText);
  auto [sol, trace] = run(inst);
  Json j = trace_to_json(trace);
  REQUIRE(j["iterations"].size() == 2);
  CHECK(j["iterations"][0]["index"] == 1);
  CHECK(j["iterations"][0]["folds"][0]["edge"] == 1);
  CHECK(j["iterations"][0]["folds"][0]["into"] == 1);
  CHECK(j["iterations"][0]["folds"][0]["support"] == Json::array({1}));
  CHECK(j["iterations"][1]["folds"].empty());
  CHECK(j["folded_assignment"] == Json::array({Json::array({1, 1, "1"})}));

  const Json& second = j["iterations"][1]["tuple"];
  CHECK(second["active_edges"] == Json::array());
  CHECK(second["lower_bounds"]["1"] == "1");
  CHECK(second["residual_capacities"]["1"] == "0");

  const Json& point = j["iterations"][0]["point"];
  CHECK(point["x"]["1"] == "1");
  CHECK(point["objective"] == "1");
}

TEST_CASE("certificate serialization names every part") {
  Instance inst = fixtures::make(fixtures::kSplitEdgeText);
  auto [sol, trace] = run(inst);
  const IterationRecord& last = trace.iterations.back();
  SeparationCertificate cert =
      compute_separation_certificate(last.point, last.psi, last.small_set, {});
  Json j = certificate_to_json(cert);
  CHECK(j["small_set"] == Json::array({2}));
  CHECK(j["medium_set"] == Json::array());
  CHECK(j["edge_rows"] == Json::array({1}));
  CHECK(j["capacity_rows"] == Json::array({1, 2}));
  CHECK(j["h_star"].size() == 2);
  CHECK(j["assignment"].size() == 3);
  for (const Json& pair : j["assignment"]) {
    REQUIRE(pair.size() == 2);
    CHECK(pair[0].contains("kind"));
    CHECK(pair[1].contains("kind"));
  }
  CHECK(j["redirection"][0][0] == Json{{"kind", "x"}, {"vertex", 2}});
  CHECK(j["redirection"][0][1] == Json{{"kind", "h"}, {"edge", 1}, {"vertex", 2}});
  CHECK(j["mapped_subedges"]["2"] == Json::array({1, 2}));
  CHECK(j["cells"]["2"] == Json::array({1, 2}));
}

TEST_CASE("verify report serialization") {
  Instance inst = fixtures::make(fixtures::kTwoVertexText);
  auto [sol, trace] = run(inst);
  Json ok = verify_report_to_json(verify_solution(inst, sol));
  CHECK(ok["pass"] == true);
  CHECK(ok["violations"] == Json::array());
  CHECK(ok["ratio"] == "1");
  CHECK(ok["f"] == 2);

  sol.x[2] = 7;
  sol.objective = 8;
  Json bad = verify_report_to_json(verify_solution(inst, sol));
  CHECK(bad["pass"] == false);
  REQUIRE(!bad["violations"].empty());
  CHECK(bad["violations"][0].contains("rule"));
  CHECK(bad["violations"][0].contains("detail"));
  CHECK(bad["violations"][0]["vertex"] == 2);
}

TEST_CASE("oracle result serialization") {
  Instance inst = fixtures::make(fixtures::kTwoVertexText);
  Json j = oracle_result_to_json(brute_force_optimum(inst));
  CHECK(j["feasible"] == true);
  CHECK(j["optimum"] == 1);
  CHECK(j["x"] == Json{{"1", 0}, {"2", 1}});
  CHECK(j["h"] == Json::array({Json::array({1, 2, "1"})}));

  OracleResult none;
  Json n = oracle_result_to_json(none);
  CHECK(n["feasible"] == false);
  CHECK_FALSE(n.contains("optimum"));
}

TEST_CASE("run report serialization") {
  RunReport report;
  report.instance_path = "x.vchc";
  report.f = 2;
  report.feasible = false;
  Json j = run_report_to_json(report);
  CHECK(j["instance"] == "x.vchc");
  CHECK(j["feasible"] == false);
  CHECK_FALSE(j.contains("final_objective"));
  CHECK_FALSE(j.contains("oracle"));
  CHECK(j.contains("wall_clock_ms"));

  report.feasible = true;
  report.final_objective = 3;
  report.lp_root_objective = Rat(5, 2);
  report.ratio = Rat(6, 5);
  report.iterations.push_back({1, Rat(5, 2), 0, 0});
  report.oracle = OracleResult{};
  j = run_report_to_json(report);
  CHECK(j["final_objective"] == 3);
  CHECK(j["lp_root_objective"] == "5/2");
  CHECK(j["ratio"] == "6/5");
  CHECK(j["iterations"][0]["objective"] == "5/2");
  CHECK(j["oracle"]["feasible"] == false);
}

TEST_CASE("file io round trip") {
  namespace fs = std::filesystem;
  fs::path path = fs::temp_directory_path() / "capvc_json_io_test.txt";
  write_file(path.string(), "alpha\nbeta\n");
  CHECK(read_file(path.string()) == "alpha\nbeta\n");
  CHECK_THROWS_AS(read_file((fs::temp_directory_path() / "capvc_no_such_file").string()),
                  std::runtime_error);
  fs::remove(path);
}
