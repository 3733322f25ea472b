#include "epq/cli/scenario.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>

#include <fmt/core.h>

#include "json.hpp"

namespace epq::cli {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& message) {
  throw Error(ErrorCode::kInvalidScenario, message);
}

const json& section(const json& doc, const char* name) {
  auto it = doc.find(name);
  if (it == doc.end()) fail(fmt::format("missing section '{}'", name));
  if (!it->is_object()) fail(fmt::format("section '{}' must be an object", name));
  return *it;
}

void reject_unknown(const json& obj, const std::string& where,
                    std::initializer_list<std::string_view> known) {
  for (const auto& [key, value] : obj.items()) {
    bool found = false;
    for (auto k : known) found = found || key == k;
    if (!found) fail(fmt::format("unknown key '{}' in {}", key, where));
  }
}

std::optional<double> optional_number(const json& obj, const std::string& where, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) return std::nullopt;
  if (!it->is_number()) fail(fmt::format("{}.{} must be a number", where, key));
  return it->get<double>();
}

double number(const json& obj, const std::string& where, const char* key) {
  auto value = optional_number(obj, where, key);
  if (!value) fail(fmt::format("missing {}.{}", where, key));
  return *value;
}

ProductionParams parse_production(const json& obj) {
  reject_unknown(obj, "production",
                 {"p", "alpha", "lambda", "theta", "gamma", "p_r", "alpha_r", "beta"});
  ProductionParams plant;
  plant.production_rate = number(obj, "production", "p");
  plant.good_fraction = number(obj, "production", "alpha");
  plant.demand_rate = number(obj, "production", "lambda");
  plant.deterioration_rate = number(obj, "production", "theta");
  plant.screening_fraction = number(obj, "production", "gamma");
  plant.rework_rate = number(obj, "production", "p_r");
  plant.recovery_fraction = number(obj, "production", "alpha_r");
  plant.backlog_fraction = optional_number(obj, "production", "beta").value_or(1.0);
  return plant;
}

CostParams parse_costs(const json& obj) {
  reject_unknown(obj, "costs", {"K", "c", "c_d", "c_p", "c_s", "c_u", "h_s", "h_r"});
  CostParams costs;
  costs.setup = number(obj, "costs", "K");
  costs.deterioration = number(obj, "costs", "c");
  costs.deteriorated_sale = number(obj, "costs", "c_d");
  costs.scrap = number(obj, "costs", "c_p");
  costs.shortage = number(obj, "costs", "c_s");
  costs.lost_sale = optional_number(obj, "costs", "c_u").value_or(0.0);
  costs.holding_serviceable = number(obj, "costs", "h_s");
  costs.holding_imperfect = number(obj, "costs", "h_r");
  return costs;
}

CentralParams parse_central(const json& obj) {
  reject_unknown(obj, "aggregated", {"n", "K_c", "c_v", "h_c"});
  auto n = obj.find("n");
  if (n == obj.end()) fail("missing aggregated.n");
  if (!n->is_number_integer()) fail("aggregated.n must be an integer");
  CentralParams central;
  central.plants = n->get<int>();
  central.central_setup = number(obj, "aggregated", "K_c");
  central.leftover_sale = number(obj, "aggregated", "c_v");
  central.holding_central = number(obj, "aggregated", "h_c");
  return central;
}

ScenarioOptions parse_options(const json& obj) {
  reject_unknown(obj, "options", {"step", "tolerance", "exact_tolerance"});
  ScenarioOptions options;
  options.step = optional_number(obj, "options", "step");
  if (options.step && !(*options.step > 0.0)) fail("options.step must be positive");
  if (auto tol = optional_number(obj, "options", "tolerance")) {
    if (!(*tol > 0.0)) fail("options.tolerance must be positive");
    options.tolerance = *tol;
  }
  if (auto tol = optional_number(obj, "options", "exact_tolerance")) {
    if (!(*tol > 0.0)) fail("options.exact_tolerance must be positive");
    options.exact_tolerance = *tol;
  }
  return options;
}

}  // namespace

std::string_view to_string(ModelKind kind) {
  return kind == ModelKind::kBasic ? "basic" : "aggregated";
}

AggregatedParams Scenario::aggregated() const {
  if (!central) throw Error(ErrorCode::kInvalidScenario, "scenario has no aggregated block");
  AggregatedParams agg;
  agg.plant = production;
  agg.costs = costs;
  agg.plants = central->plants;
  agg.central_setup = central->central_setup;
  agg.leftover_sale = central->leftover_sale;
  agg.holding_central = central->holding_central;
  return agg;
}

Scenario parse_scenario(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(fmt::format("malformed scenario: {}", e.what()));
  }
  if (!doc.is_object()) fail("scenario must be an object");
  reject_unknown(doc, "scenario", {"model", "production", "costs", "aggregated", "options"});

  Scenario scenario;
  auto model = doc.find("model");
  if (model == doc.end()) fail("missing key 'model'");
  if (*model == "basic") {
    scenario.model = ModelKind::kBasic;
  } else if (*model == "aggregated") {
    scenario.model = ModelKind::kAggregated;
  } else {
    fail("model must be \"basic\" or \"aggregated\"");
  }

  scenario.production = parse_production(section(doc, "production"));
  scenario.costs = parse_costs(section(doc, "costs"));
  if (doc.contains("aggregated")) scenario.central = parse_central(section(doc, "aggregated"));
  if (doc.contains("options")) scenario.options = parse_options(section(doc, "options"));

  if (scenario.model == ModelKind::kAggregated && !scenario.central) {
    fail("model \"aggregated\" needs an 'aggregated' section");
  }
  if (scenario.model == ModelKind::kBasic && scenario.central) {
    fail("an 'aggregated' section requires model \"aggregated\"");
  }
  return scenario;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, fmt::format("cannot read {}", path.string()));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario(buffer.str());
}

void validate(const Scenario& scenario) {
  if (scenario.model == ModelKind::kAggregated) {
    epq::validate(scenario.aggregated());
  } else {
    epq::validate(scenario.production, scenario.costs);
  }
}

}  // namespace epq::cli
