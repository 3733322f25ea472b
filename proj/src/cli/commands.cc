#include "epq/cli/commands.hpp"

#include <cstdio>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>
#include <string>
#include <system_error>

#include <fmt/core.h>
#include <fmt/ostream.h>

#include "CLI11.hpp"
#include "epq/aggregated.hpp"
#include "epq/closed_form.hpp"
#include "epq/trajectory.hpp"

namespace epq::cli {

namespace fs = std::filesystem;

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNoRoot:
    case ErrorCode::kNoSignChange:
    case ErrorCode::kNegativePeriod:
    case ErrorCode::kNoInteriorOptimum:
    case ErrorCode::kMinimizerFailed:
      return kExitInfeasible;
    case ErrorCode::kIo:
      return kExitIo;
    default:
      return kExitValidation;
  }
}

Solution solve(const Scenario& scenario, bool force_partial) {
  validate(scenario);
  if (scenario.model == ModelKind::kAggregated) return solve_aggregated(scenario.aggregated());
  SolveOptions options;
  options.force_partial = force_partial;
  options.tol = scenario.options.tolerance;
  return solve_basic(scenario.production, scenario.costs, options);
}

ExactComparison compare_with_exact(const Scenario& scenario, bool force_partial) {
  Solution solution = solve(scenario, force_partial);
  ExactComparison cmp;
  cmp.pair = solution.optimum;
  cmp.approximate_cost = solution.total_cost;

  optimizer::MinimizeReport report;
  if (scenario.model == ModelKind::kAggregated) {
    AggregatedParams agg = scenario.aggregated();
    cmp.exact_cost_at_pair = exact_cost_aggregated(cmp.pair.t4, cmp.pair.t, agg);
    report = minimize_exact_aggregated(agg, cmp.pair, scenario.options.exact_tolerance);
  } else {
    cmp.exact_cost_at_pair =
        exact_cost_basic(cmp.pair.t4, cmp.pair.t, scenario.production, scenario.costs);
    report = minimize_exact_basic(scenario.production, scenario.costs, cmp.pair,
                                  scenario.options.exact_tolerance);
  }
  if (!report.converged) {
    throw Error(ErrorCode::kMinimizerFailed,
                fmt::format("exact optimum search did not converge after {} evaluations",
                            report.probe_count));
  }
  cmp.exact_optimum = {report.point[0], report.point[1]};
  cmp.exact_cost = report.value;
  cmp.evaluations = report.probe_count;
  cmp.converged = report.converged;
  return cmp;
}

void write_atomically(const fs::path& path, std::string_view content) {
  fs::path temp = path;
  temp += ".partial";
  {
    std::ofstream file(temp, std::ios::binary | std::ios::trunc);
    if (!file) throw Error(ErrorCode::kIo, fmt::format("cannot open {} for writing", temp.string()));
    file.write(content.data(), static_cast<std::streamsize>(content.size()));
    file.flush();
    if (!file) {
      file.close();
      std::error_code ignored;
      fs::remove(temp, ignored);
      throw Error(ErrorCode::kIo, fmt::format("write to {} failed", temp.string()));
    }
  }
  std::error_code ec;
  fs::rename(temp, path, ec);
  if (ec) {
    std::error_code ignored;
    fs::remove(temp, ignored);
    throw Error(ErrorCode::kIo, fmt::format("cannot move output to {}: {}", path.string(), ec.message()));
  }
}

namespace {

int guarded(std::ostream& err, const std::function<void()>& body) {
  try {
    body();
    return kExitOk;
  } catch (const ValidationError& e) {
    fmt::print(err, "error: invalid parameters\n");
    for (const Violation& v : e.violations()) fmt::print(err, "  {}: {}\n", v.field, v.message);
    return kExitValidation;
  } catch (const Error& e) {
    fmt::print(err, "error ({}): {}\n", to_string(e.code()), e.what());
    return exit_code(e.code());
  }
}

void emit(const nlohmann::json& report, const CommandOptions& options, std::ostream& out) {
  if (options.out) write_atomically(*options.out, render_json(report));
  out << render_text(report);
}

}  // namespace

int run_solve(const CommandOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    Scenario scenario = load_scenario(options.scenario);
    Solution solution = solve(scenario, options.force_partial);
    for (const std::string& w : solution.warnings) fmt::print(err, "warning: {}\n", w);
    emit(solution_report(scenario, solution), options, out);
  });
}

int run_validate(const CommandOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    Scenario scenario = load_scenario(options.scenario);
    ExactComparison cmp = compare_with_exact(scenario, options.force_partial);
    emit(comparison_report(scenario, cmp), options, out);
  });
}

int run_export(const CommandOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    Scenario scenario = load_scenario(options.scenario);
    Solution solution = solve(scenario, options.force_partial);
    double step = options.step.value_or(scenario.options.step.value_or(solution.optimum.t / 1000.0));
    if (!(step > 0.0)) throw Error(ErrorCode::kInvalidParameter, "step must be positive");
    std::vector<PhasePoint> points = sample_trajectory(solution, scenario.production, step);
    std::ostringstream csv;
    write_trajectory_csv(csv, points);
    if (options.out) {
      write_atomically(*options.out, csv.str());
    } else {
      out << csv.str();
    }
  });
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Production-inventory lot sizing with rework and deterioration"};
  app.require_subcommand(1);

  CommandOptions options;
  std::string scenario;
  std::string out_path;
  double step = 0.0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--scenario", scenario, "scenario file (JSON)")->required();
    sub->add_option("--out", out_path, "write the report (or CSV) to this file");
    sub->add_flag("--force-partial", options.force_partial,
                  "solve beta = 1 through the partial-backlog path");
  };
  CLI::App* solve_cmd = app.add_subcommand("solve", "solve a scenario and print the report");
  CLI::App* validate_cmd =
      app.add_subcommand("validate", "compare the closed form against the exact model");
  CLI::App* export_cmd = app.add_subcommand("export", "write the inventory trajectory as CSV");
  add_common(solve_cmd);
  add_common(validate_cmd);
  add_common(export_cmd);
  CLI::Option* step_opt = export_cmd->add_option("--step", step, "sampling step (time units)")
                              ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  options.scenario = scenario;
  if (!out_path.empty()) options.out = fs::path(out_path);
  if (step_opt->count() > 0) options.step = step;

  if (solve_cmd->parsed()) return run_solve(options, out, err);
  if (validate_cmd->parsed()) return run_validate(options, out, err);
  return run_export(options, out, err);
}

}  // namespace epq::cli
