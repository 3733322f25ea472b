#include "epq/cli/report.hpp"

#include <cmath>
#include <cstdlib>

#include <fmt/core.h>

#include "epq/aggregated.hpp"
#include "epq/closed_form.hpp"

namespace epq::cli {

using nlohmann::json;

namespace {

json num(double value) {
  if (!std::isfinite(value)) return nullptr;
  return round_sig(value);
}

json pair_json(DecisionPair pair) {
  return {{"T4", num(pair.t4)}, {"T", num(pair.t)}};
}

json coefficients_json(const Scenario& scenario) {
  if (scenario.model == ModelKind::kAggregated) {
    AggregatedCoefficients co = coefficients_aggregated(scenario.aggregated());
    return {{"A1", num(co.a1)}, {"A2", num(co.a2)}, {"B", num(co.b)}, {"C", num(co.c)},
            {"D1", num(co.d1)}, {"D2", num(co.d2)}, {"K", num(co.k)},
            {"t_bound", num(co.t_bound)}};
  }
  if (!scenario.production.complete_backlog()) return nullptr;
  GenericCoefficients co = coefficients_complete(scenario.production, scenario.costs);
  json out = {{"A", num(co.a)}, {"B", num(co.b)}, {"C", num(co.c)}, {"D", num(co.d)},
              {"K", num(co.k)}};
  out["eta"] = co.eta ? num(*co.eta) : json(nullptr);
  out["omega"] = co.omega ? num(*co.omega) : json(nullptr);
  return out;
}

void render(std::string& out, const json& value, int depth) {
  const std::string indent(2 * depth, ' ');
  for (const auto& [key, item] : value.items()) {
    if (item.is_object()) {
      out += fmt::format("{}{}:\n", indent, key);
      render(out, item, depth + 1);
    } else if (item.is_array() && !item.empty()) {
      out += fmt::format("{}{}:\n", indent, key);
      for (std::size_t i = 0; i < item.size(); ++i) {
        if (item[i].is_object()) {
          out += fmt::format("{}  [{}]\n", indent, i);
          render(out, item[i], depth + 2);
        } else {
          out += fmt::format("{}  - {}\n", indent,
                             item[i].is_string() ? item[i].get<std::string>() : item[i].dump());
        }
      }
    } else if (item.is_number_float()) {
      out += fmt::format("{}{}: {:.6g}\n", indent, key, item.get<double>());
    } else if (item.is_string()) {
      out += fmt::format("{}{}: {}\n", indent, key, item.get<std::string>());
    } else {
      out += fmt::format("{}{}: {}\n", indent, key, item.dump());
    }
  }
}

}  // namespace

double round_sig(double value, int digits) {
  if (!std::isfinite(value) || value == 0.0) return value == 0.0 ? 0.0 : value;
  return std::strtod(fmt::format("{:.{}g}", value, digits).c_str(), nullptr);
}

json solution_report(const Scenario& scenario, const Solution& solution) {
  json times = {{"T1", num(solution.times.t1)}, {"T2", num(solution.times.t2)},
                {"T3", num(solution.times.t3)}, {"T4", num(solution.times.t4)},
                {"T5", num(solution.times.t5)}, {"T", num(solution.times.total)}};
  if (solution.times.t6) times["T6"] = num(*solution.times.t6);

  json levels = {{"I_s", num(solution.levels.end_of_production)},
                 {"I_m", num(solution.levels.peak)},
                 {"I_b", num(solution.levels.backlog)},
                 {"I_c", num(solution.levels.imperfect_peak)}};
  if (solution.levels.pooled_recovered) levels["nI_c"] = num(*solution.levels.pooled_recovered);

  json candidates = json::array();
  for (const CandidatePair& cand : solution.candidates) {
    candidates.push_back({{"case", to_string(cand.case_label)},
                          {"available", cand.available},
                          {"unclamped", pair_json(cand.unclamped)},
                          {"pair", pair_json(cand.pair)},
                          {"clamped", cand.clamped},
                          {"objective", num(cand.objective)}});
  }

  json report = {{"model", to_string(scenario.model)},
                 {"case", to_string(solution.case_label)},
                 {"optimum", pair_json(solution.optimum)},
                 {"times", times},
                 {"levels", levels},
                 {"production_time", num(solution.production_time)},
                 {"quantity", num(solution.quantity)},
                 {"total_cost", num(solution.total_cost)},
                 {"clamped", solution.clamped},
                 {"candidates", candidates},
                 {"coefficients", coefficients_json(scenario)},
                 {"warnings", solution.warnings}};
  if (solution.production_time_proportional) {
    report["production_time_proportional"] = num(*solution.production_time_proportional);
  }
  return report;
}

json comparison_report(const Scenario& scenario, const ExactComparison& comparison) {
  return {{"model", to_string(scenario.model)},
          {"closed_form",
           {{"T4", num(comparison.pair.t4)},
            {"T", num(comparison.pair.t)},
            {"approximate_cost", num(comparison.approximate_cost)},
            {"exact_cost", num(comparison.exact_cost_at_pair)}}},
          {"exact_optimum",
           {{"T4", num(comparison.exact_optimum.t4)},
            {"T", num(comparison.exact_optimum.t)},
            {"exact_cost", num(comparison.exact_cost)},
            {"evaluations", comparison.evaluations},
            {"converged", comparison.converged}}},
          {"gap_percent", num(100.0 * comparison.gap())}};
}

std::string render_json(const json& report) { return report.dump(2) + "\n"; }

std::string render_text(const json& report) {
  std::string out;
  render(out, report, 0);
  return out;
}

}  // namespace epq::cli
