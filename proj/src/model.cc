#include "epq/model.hpp"

#include <cmath>

#include <fmt/format.h>

#include "epq/series.hpp"

namespace epq {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInfeasibleRates: return "infeasible-rates";
    case ErrorCode::kOutOfRangeFraction: return "out-of-range-fraction";
    case ErrorCode::kNonpositiveRate: return "nonpositive-rate";
    case ErrorCode::kNegativeCost: return "negative-cost";
    case ErrorCode::kInvalidParameter: return "invalid-parameter";
    case ErrorCode::kDomain: return "domain";
    case ErrorCode::kNoRoot: return "no-root";
    case ErrorCode::kNoSignChange: return "no-sign-change";
    case ErrorCode::kNegativePeriod: return "negative-period";
    case ErrorCode::kNoInteriorOptimum: return "no-interior-optimum";
    case ErrorCode::kMinimizerFailed: return "minimizer-failed";
    case ErrorCode::kInvalidScenario: return "invalid-scenario";
    case ErrorCode::kIo: return "io";
  }
  return "unknown";
}

std::string_view to_string(CaseLabel label) {
  switch (label) {
    case CaseLabel::kBasicComplete: return "basic-complete";
    case CaseLabel::kBasicPartial: return "basic-partial";
    case CaseLabel::kAggregatedCaseI: return "aggregated-case-I";
    case CaseLabel::kAggregatedCaseII: return "aggregated-case-II";
  }
  return "unknown";
}

CostParams CostParams::scaled(double factor) const {
  return {setup * factor,        deterioration * factor,       deteriorated_sale * factor,
          scrap * factor,        shortage * factor,            lost_sale * factor,
          holding_serviceable * factor, holding_imperfect * factor};
}

double deterioration_weight(const ProductionParams& plant, const CostParams& costs) {
  const double screened = plant.screening_fraction;
  return screened * costs.deterioration + (1.0 - screened) * costs.deteriorated_sale;
}

namespace {

std::string join_messages(const std::vector<Violation>& violations) {
  std::string out;
  for (const Violation& v : violations) {
    if (!out.empty()) out += "; ";
    out += v.message;
  }
  return out;
}

// Comparisons are written so that NaN fails every check.
void require_rate(std::vector<Violation>& out, const char* field, double value) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    out.push_back({ErrorCode::kNonpositiveRate, field,
                   fmt::format("{} must be a finite rate > 0 (got {})", field, value)});
  }
}

void require_fraction(std::vector<Violation>& out, const char* field, double value) {
  if (!(value > 0.0 && value <= 1.0)) {
    out.push_back({ErrorCode::kOutOfRangeFraction, field,
                   fmt::format("{} must lie in (0, 1] (got {})", field, value)});
  }
}

void require_cost(std::vector<Violation>& out, const char* field, double value) {
  if (!(value >= 0.0) || !std::isfinite(value)) {
    out.push_back({ErrorCode::kNegativeCost, field,
                   fmt::format("{} must be a finite cost >= 0 (got {})", field, value)});
  }
}

}  // namespace

ValidationError::ValidationError(std::vector<Violation> violations)
    : Error(violations.empty() ? ErrorCode::kInvalidParameter : violations.front().code,
            join_messages(violations)),
      violations_(std::move(violations)) {}

std::vector<Violation> check(const ProductionParams& plant) {
  std::vector<Violation> out;
  require_rate(out, "p", plant.production_rate);
  require_fraction(out, "alpha", plant.good_fraction);
  require_rate(out, "lambda", plant.demand_rate);
  require_rate(out, "theta", plant.deterioration_rate);
  require_fraction(out, "gamma", plant.screening_fraction);
  require_rate(out, "p_r", plant.rework_rate);
  require_fraction(out, "alpha_r", plant.recovery_fraction);
  require_fraction(out, "beta", plant.backlog_fraction);

  const double good = plant.good_rate();
  if (!(good > plant.demand_rate)) {
    out.push_back({ErrorCode::kInfeasibleRates, "alpha",
                   fmt::format("alpha*p > lambda violated: alpha*p = {} <= lambda = {}", good,
                               plant.demand_rate)});
  }
  const double recovered = plant.recovery_fraction * plant.rework_rate;
  if (!(recovered > plant.demand_rate)) {
    out.push_back({ErrorCode::kInfeasibleRates, "alpha_r",
                   fmt::format("alpha_r*p_r > lambda violated: alpha_r*p_r = {} <= lambda = {}",
                               recovered, plant.demand_rate)});
  }
  return out;
}

std::vector<Violation> check(const CostParams& costs) {
  std::vector<Violation> out;
  if (!(costs.setup > 0.0) || !std::isfinite(costs.setup)) {
    out.push_back({costs.setup < 0.0 ? ErrorCode::kNegativeCost : ErrorCode::kInvalidParameter,
                   "K", fmt::format("K must be a finite cost > 0 (got {})", costs.setup)});
  }
  require_cost(out, "c", costs.deterioration);
  require_cost(out, "c_d", costs.deteriorated_sale);
  require_cost(out, "c_p", costs.scrap);
  require_cost(out, "c_s", costs.shortage);
  require_cost(out, "c_u", costs.lost_sale);
  require_cost(out, "h_s", costs.holding_serviceable);
  require_cost(out, "h_r", costs.holding_imperfect);
  return out;
}

std::vector<Violation> check(const AggregatedParams& agg) {
  std::vector<Violation> out = check(agg.plant);
  std::vector<Violation> cost_issues = check(agg.costs);
  out.insert(out.end(), cost_issues.begin(), cost_issues.end());
  if (agg.plants < 1) {
    out.push_back({ErrorCode::kInvalidParameter, "n",
                   fmt::format("n must be >= 1 (got {})", agg.plants)});
  }
  require_cost(out, "K_c", agg.central_setup);
  require_cost(out, "c_v", agg.leftover_sale);
  require_cost(out, "h_c", agg.holding_central);
  if (agg.plant.backlog_fraction != 1.0) {
    out.push_back({ErrorCode::kInvalidParameter, "beta",
                   fmt::format("aggregated model requires complete backlogging, beta = 1 (got {})",
                               agg.plant.backlog_fraction)});
  }
  return out;
}

BasicModel validate(const ProductionParams& plant, const CostParams& costs) {
  std::vector<Violation> out = check(plant);
  std::vector<Violation> cost_issues = check(costs);
  out.insert(out.end(), cost_issues.begin(), cost_issues.end());
  if (!out.empty()) throw ValidationError(std::move(out));
  return {plant, costs};
}

AggregatedParams validate(const AggregatedParams& agg) {
  std::vector<Violation> out = check(agg);
  if (!out.empty()) throw ValidationError(std::move(out));
  return agg;
}

namespace series {

double decay_mean(double z) {
  if (std::abs(z) < kThreshold) return 1.0 - z / 2.0 + z * z / 6.0;
  return -std::expm1(-z) / z;
}

double growth_mean(double z) {
  if (std::abs(z) < kThreshold) return 1.0 + z / 2.0 + z * z / 6.0;
  return std::expm1(z) / z;
}

double decay_area(double z) {
  if (std::abs(z) < kThreshold) return 0.5 - z / 6.0 + z * z / 24.0;
  return (std::expm1(-z) + z) / (z * z);
}

double growth_area(double z) {
  if (std::abs(z) < kThreshold) return 0.5 + z / 6.0 + z * z / 24.0;
  return (std::expm1(z) - z) / (z * z);
}

}  // namespace series
}  // namespace epq
