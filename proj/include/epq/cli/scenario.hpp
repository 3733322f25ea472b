#ifndef EPQ_CLI_SCENARIO_HPP
#define EPQ_CLI_SCENARIO_HPP

#include <filesystem>
#include <optional>
#include <string_view>

#include "epq/model.hpp"
#include "epq/optimizer.hpp"

namespace epq::cli {

enum class ModelKind { kBasic, kAggregated };

std::string_view to_string(ModelKind kind);

struct CentralParams {
  int plants = 1;
  double central_setup = 0.0;
  double leftover_sale = 0.0;
  double holding_central = 0.0;
};

struct ScenarioOptions {
  std::optional<double> step;
  double tolerance = optimizer::kPolynomialTol;
  double exact_tolerance = optimizer::kNestedTol;
};

struct Scenario {
  ModelKind model = ModelKind::kBasic;
  ProductionParams production;
  CostParams costs;
  std::optional<CentralParams> central;
  ScenarioOptions options;

  AggregatedParams aggregated() const;
};

/// Parses a scenario document. Unknown keys, missing fields and wrong types
/// throw Error(kInvalidScenario); model invariants are not checked here.
Scenario parse_scenario(std::string_view text);

Scenario load_scenario(const std::filesystem::path& path);

/// Throws ValidationError when the scenario violates a model invariant.
void validate(const Scenario& scenario);

}  // namespace epq::cli

#endif  // EPQ_CLI_SCENARIO_HPP
