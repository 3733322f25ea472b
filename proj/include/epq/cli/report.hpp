#ifndef EPQ_CLI_REPORT_HPP
#define EPQ_CLI_REPORT_HPP

#include <string>

#include "epq/cli/scenario.hpp"
#include "epq/model.hpp"
#include "json.hpp"

namespace epq::cli {

/// Rounds to `digits` significant digits; non-finite values pass through.
double round_sig(double value, int digits = 6);

/// Closed-form pair against the exact model's own optimum.
struct ExactComparison {
  DecisionPair pair;
  double approximate_cost = 0.0;
  double exact_cost_at_pair = 0.0;
  DecisionPair exact_optimum;
  double exact_cost = 0.0;
  int evaluations = 0;
  bool converged = false;

  double gap() const { return (exact_cost_at_pair - exact_cost) / exact_cost; }
};

nlohmann::json solution_report(const Scenario& scenario, const Solution& solution);
nlohmann::json comparison_report(const Scenario& scenario, const ExactComparison& comparison);

/// Machine-readable form, pretty printed with a trailing newline.
std::string render_json(const nlohmann::json& report);

/// Indented "key: value" listing of the same document.
std::string render_text(const nlohmann::json& report);

}  // namespace epq::cli

#endif  // EPQ_CLI_REPORT_HPP
