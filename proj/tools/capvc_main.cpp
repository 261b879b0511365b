#include "capvc/errors.hpp"
#include "capvc/flow.hpp"
#include "capvc/json_io.hpp"
#include "capvc/oracle.hpp"
#include "capvc/rounding.hpp"
#include "capvc/verify.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>

namespace {

using namespace capvc;

constexpr int kOk = 0;
constexpr int kError = 1;
constexpr int kInfeasible = 2;

unsigned long long oracle_space_limit() {
  const char* env = std::getenv("CAPVC_MAX_ORACLE_SPACE");
  if (!env || !*env) return 10'000'000ULL;
  try {
    size_t used = 0;
    unsigned long long limit = std::stoull(env, &used);
    if (used != std::string(env).size() || limit == 0) throw std::invalid_argument(env);
    return limit;
  } catch (const std::exception&) {
    throw std::runtime_error(std::string("CAPVC_MAX_ORACLE_SPACE is not a positive integer: ") +
                             env);
  }
}

void emit(const std::string& path, const std::string& content) {
  if (path.empty())
    std::cout << content;
  else
    write_file(path, content);
}

struct SolveArgs {
  std::string instance_path;
  std::string json_path;
  std::string trace_path;
  std::string report_path;
  std::string lp_path;
  bool compare_oracle = false;
};

int cmd_solve(const SolveArgs& args) {
  Instance inst = load_instance(args.instance_path);
  RunReport report;
  report.instance_path = args.instance_path;
  report.f = inst.max_edge_size();

  if (!args.lp_path.empty()) {
    ParamTuple root = initial_tuple(inst);
    write_file(args.lp_path, render_lp(build_lp(root)));
  }

  auto started = std::chrono::steady_clock::now();
  Solution sol;
  Trace trace;
  try {
    std::tie(sol, trace) = run(inst);
  } catch (const InfeasibleInstanceError& err) {
    report.feasible = false;
    report.wall_clock_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                               std::chrono::steady_clock::now() - started)
                               .count();
    if (!args.report_path.empty()) write_file(args.report_path, dump_json(run_report_to_json(report)));
    std::cerr << "infeasible: " << err.what() << "\n";
    return kInfeasible;
  }
  report.feasible = true;
  report.final_objective = sol.objective;
  report.lp_root_objective = sol.lp_root_objective;
  report.ratio = sol.ratio;
  for (const IterationRecord& rec : trace.iterations)
    report.iterations.push_back({rec.index, rec.point.objective,
                                 static_cast<int>(rec.small_set.size()),
                                 static_cast<int>(rec.folds.size())});

  int rc = kOk;
  if (args.compare_oracle) {
    OracleResult oracle = brute_force_optimum(inst, oracle_space_limit());
    report.oracle = oracle;
    if (!oracle.feasible) {
      std::cerr << "oracle disagrees: search found no assignment but the solver produced one\n";
      rc = kError;
    } else if (sol.objective > inst.max_edge_size() * oracle.optimum) {
      std::cerr << "approximation bound broken: solver " << sol.objective << " vs optimum "
                << oracle.optimum << " at factor " << inst.max_edge_size() << "\n";
      rc = kError;
    } else {
      std::cerr << "oracle agreement: solver " << sol.objective << ", optimum " << oracle.optimum
                << ", factor bound " << inst.max_edge_size() << " holds\n";
    }
  }

  report.wall_clock_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                             std::chrono::steady_clock::now() - started)
                             .count();
  emit(args.json_path, dump_json(solution_to_json(sol)));
  if (!args.trace_path.empty()) write_file(args.trace_path, dump_json(trace_to_json(trace)));
  if (!args.report_path.empty()) write_file(args.report_path, dump_json(run_report_to_json(report)));
  return rc;
}

int cmd_verify(const std::string& instance_path, const std::string& solution_path,
               const std::string& json_path) {
  Instance inst = load_instance(instance_path);
  Json parsed;
  try {
    parsed = Json::parse(read_file(solution_path));
  } catch (const nlohmann::json::parse_error& err) {
    throw ParseError(0, std::string("solution file is not JSON: ") + err.what());
  }
  Solution sol = solution_from_json(parsed);
  VerifyReport report = verify_solution(inst, sol);
  emit(json_path, dump_json(verify_report_to_json(report)));
  return report.pass ? kOk : kError;
}

int cmd_oracle(const std::string& instance_path, const std::string& json_path, long budget_cap) {
  Instance inst = load_instance(instance_path);
  std::optional<long> cap;
  if (budget_cap >= 0) cap = budget_cap;
  OracleResult result = brute_force_optimum(inst, oracle_space_limit(), cap);
  emit(json_path, dump_json(oracle_result_to_json(result)));
  return result.feasible ? kOk : kInfeasible;
}

int cmd_gen(const GeneratorConfig& cfg, const std::string& out_path) {
  Instance inst = generate_instance(cfg);
  emit(out_path, render_instance(inst));
  return kOk;
}

int cmd_check_feasibility(const std::string& instance_path) {
  Instance inst = load_instance(instance_path);
  CoverageResult result = check_feasibility(inst);
  Json j = Json::object();
  j["feasible"] = result.feasible;
  if (!result.feasible) j["witness"] = result.failure->describe();
  std::cout << dump_json(j);
  return result.feasible ? kOk : kInfeasible;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + "\"";
}

int cmd_bench(const std::string& dir, const std::string& csv_path, bool with_oracle) {
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".vchc")
      files.push_back(entry.path());
  std::sort(files.begin(), files.end());

  std::ostringstream csv;
  csv << "instance,n,m,f,opt,alg,ratio,iterations,ms\n";
  int rc = kOk;
  for (const auto& path : files) {
    Instance inst = load_instance(path.string());
    std::string name = path.filename().string();
    std::string opt = "-", alg = "-", ratio = "-";
    size_t iterations = 0;
    auto started = std::chrono::steady_clock::now();
    try {
      auto [sol, trace] = run(inst);
      alg = std::to_string(sol.objective);
      ratio = rat_string(sol.ratio);
      iterations = trace.iterations.size();
      VerifyReport report = verify_solution(inst, sol);
      if (!report.pass) {
        std::cerr << name << ": verification failed\n";
        rc = kError;
      }
      if (with_oracle) {
        OracleResult oracle = brute_force_optimum(inst, oracle_space_limit());
        if (oracle.feasible) {
          opt = std::to_string(oracle.optimum);
          if (sol.objective > inst.max_edge_size() * oracle.optimum) {
            std::cerr << name << ": approximation bound broken\n";
            rc = kError;
          }
        }
      }
    } catch (const InfeasibleInstanceError&) {
      // leave the dashes in place
    } catch (const SearchSpaceError& err) {
      std::cerr << name << ": " << err.what() << "\n";
    }
    long ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                  std::chrono::steady_clock::now() - started)
                  .count();
    csv << csv_field(name) << ',' << inst.vertex_count() << ',' << inst.edge_count() << ','
        << inst.max_edge_size() << ',' << opt << ',' << alg << ',' << ratio << ',' << iterations
        << ',' << ms << '\n';
  }
  emit(csv_path, csv.str());
  return rc;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact solver for demand covering with capacitated vertex copies"};
  app.require_subcommand(1);

  SolveArgs solve_args;
  CLI::App* solve = app.add_subcommand("solve", "Run the iterative rounding pipeline");
  solve->add_option("instance", solve_args.instance_path, "instance file")->required();
  solve->add_option("--json", solve_args.json_path, "write the solution JSON here (default stdout)");
  solve->add_option("--trace", solve_args.trace_path, "write the full iteration trace here");
  solve->add_option("--report", solve_args.report_path, "write the run report here");
  solve->add_option("--dump-lp", solve_args.lp_path, "write the root LP in plain text here");
  solve->add_flag("--compare-oracle", solve_args.compare_oracle,
                  "also brute-force the optimum and check the factor bound");

  std::string verify_instance, verify_solution_path, verify_json;
  CLI::App* verify = app.add_subcommand("verify", "Check a solution file against an instance");
  verify->add_option("instance", verify_instance, "instance file")->required();
  verify->add_option("solution", verify_solution_path, "solution JSON file")->required();
  verify->add_option("--json", verify_json, "write the verification report here (default stdout)");

  std::string oracle_instance, oracle_json;
  long budget_cap = -1;
  CLI::App* oracle = app.add_subcommand("oracle", "Exhaustively search for the optimum");
  oracle->add_option("instance", oracle_instance, "instance file")->required();
  oracle->add_option("--json", oracle_json, "write the result here (default stdout)");
  oracle->add_option("--budget-cap", budget_cap, "only search budgets up to this value");

  GeneratorConfig gen_cfg;
  std::string gen_out;
  bool gen_no_repair = false;
  CLI::App* gen = app.add_subcommand("gen", "Generate a random instance");
  gen->add_option("--seed", gen_cfg.seed, "RNG seed")->required();
  gen->add_option("--vertices", gen_cfg.n_vertices, "vertex count")->required();
  gen->add_option("--edges", gen_cfg.n_edges, "edge count")->required();
  gen->add_option("--max-edge-size", gen_cfg.max_edge_size, "largest edge size")->required();
  gen->add_option("--max-demand", gen_cfg.max_demand, "largest demand");
  gen->add_option("--max-capacity", gen_cfg.max_capacity, "largest capacity");
  gen->add_option("--max-multiplicity", gen_cfg.max_multiplicity, "largest multiplicity");
  gen->add_flag("--no-repair", gen_no_repair, "keep the instance even if it is infeasible");
  gen->add_option("-o,--output", gen_out, "write the instance here (default stdout)");

  std::string feas_instance;
  CLI::App* feas = app.add_subcommand("check-feasibility",
                                      "Test whether maximal multiplicities can cover all demand");
  feas->add_option("instance", feas_instance, "instance file")->required();

  std::string bench_dir, bench_csv;
  bool bench_oracle = false;
  CLI::App* bench = app.add_subcommand("bench", "Solve and verify every .vchc file in a directory");
  bench->add_option("dir", bench_dir, "directory of instance files")->required();
  bench->add_option("--csv", bench_csv, "write the summary CSV here (default stdout)");
  bench->add_flag("--compare-oracle", bench_oracle, "also brute-force each optimum");

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) return cmd_solve(solve_args);
    if (verify->parsed()) return cmd_verify(verify_instance, verify_solution_path, verify_json);
    if (oracle->parsed()) return cmd_oracle(oracle_instance, oracle_json, budget_cap);
    if (gen->parsed()) {
      gen_cfg.repair_to_feasible = !gen_no_repair;
      return cmd_gen(gen_cfg, gen_out);
    }
    if (feas->parsed()) return cmd_check_feasibility(feas_instance);
    if (bench->parsed()) return cmd_bench(bench_dir, bench_csv, bench_oracle);
  } catch (const InfeasibleInstanceError& err) {
    std::cerr << "infeasible: " << err.what() << "\n";
    return kInfeasible;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kError;
  }
  return kError;
}
