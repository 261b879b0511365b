#pragma once

#include "capvc/instance.hpp"
#include "capvc/oracle.hpp"
#include "capvc/rounding.hpp"
#include "capvc/verify.hpp"

#include <json.hpp>

#include <optional>
#include <string>

namespace capvc {

using Json = nlohmann::ordered_json;

// All rationals are rendered as strings ("p" or "p/q"), never as floats.

Json solution_to_json(const Solution& sol);
Solution solution_from_json(const Json& j); // throws ParseError on bad shape

Json trace_to_json(const Trace& trace);
Json point_to_json(const FractionalPoint& p);
Json tuple_to_json(const ParamTuple& psi);
Json certificate_to_json(const SeparationCertificate& cert);
Json verify_report_to_json(const VerifyReport& report);
Json oracle_result_to_json(const OracleResult& result);

struct RunReport {
  std::string instance_path;
  int f = 1;
  bool feasible = false;
  struct IterationLine {
    int index = 0;
    Rat objective;
    int small_set_size = 0;
    int edges_folded = 0;
  };
  std::vector<IterationLine> iterations;
  long final_objective = 0;
  Rat lp_root_objective;
  Rat ratio;
  std::optional<OracleResult> oracle;
  long wall_clock_ms = 0;
};

Json run_report_to_json(const RunReport& report);

std::string dump_json(const Json& j); // 2-space indent, trailing newline
void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

} // namespace capvc
