#include "epq/aggregated.hpp"

#include <cmath>
#include <optional>

#include <fmt/format.h>

#include "epq/closed_form.hpp"
#include "epq/trajectory.hpp"

namespace epq {

GenericCoefficients AggregatedCoefficients::for_case(CaseLabel label) const {
  GenericCoefficients g;
  const bool leftover = label == CaseLabel::kAggregatedCaseI;
  g.a = leftover ? a1 : a2;
  g.b = b;
  g.c = c;
  g.d = leftover ? d1 : d2;
  g.k = k;
  return g;
}

AggregatedCoefficients coefficients_aggregated(const AggregatedParams& agg) {
  const ProductionParams& plant = agg.plant;
  const CostParams& costs = agg.costs;
  const double n = agg.plants;
  const double alpha = plant.good_fraction;
  const double p = plant.production_rate;
  const double lambda = plant.demand_rate;
  const double x = plant.decay();
  const double good = plant.good_rate();
  const double net = plant.net_production();
  // Recovered units delivered per unit of cycle length.
  const double inflow = n * lambda * (1.0 - alpha) / alpha;

  AggregatedCoefficients k;
  const double shared = costs.holding_imperfect * n * (1.0 - alpha) * lambda * lambda / (2.0 * alpha * alpha * p) +
                        costs.shortage * n * net * lambda / (2.0 * good);
  k.a1 = shared + agg.holding_central * (inflow - lambda / 2.0) - agg.leftover_sale * inflow * x;
  k.a2 = shared + agg.holding_central * lambda * (n * (1.0 - alpha) / alpha) * (n * (1.0 - alpha) / alpha) / 2.0;
  k.b = -costs.shortage * n * lambda;
  k.c = deterioration_weight(plant, costs) * n * lambda * plant.deterioration_rate / 2.0 +
        (costs.holding_serviceable + costs.shortage) * n * lambda * good / (2.0 * net);
  k.d1 = agg.leftover_sale * (inflow - lambda);
  k.d2 = costs.lost_sale * (lambda - inflow);
  k.k = n * costs.setup + agg.central_setup;
  k.t_bound = (1.0 - alpha / (n * (1.0 - alpha))) / x;
  return k;
}

double recovered_stock(double t4, double t, const AggregatedParams& agg) {
  const ProductionParams& plant = agg.plant;
  return agg.plants * plant.demand_rate * (1.0 - plant.good_fraction) / plant.good_fraction *
         (t + plant.decay() * t4 * t4 / 2.0);
}

namespace {

CandidatePair candidate(const AggregatedCoefficients& coeffs, CaseLabel label,
                        std::vector<std::string>& warnings) {
  CandidatePair cand;
  cand.case_label = label;
  const GenericCoefficients g = coeffs.for_case(label);
  try {
    cand.unclamped = solve_closed_form(g);
    cand.pair = cand.unclamped;
    cand.available = true;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kNoInteriorOptimum) throw;
    warnings.push_back(fmt::format("{} objective has no interior optimum: {}", to_string(label), e.what()));
  }
  return cand;
}

void clamp_to_boundary(CandidatePair& cand, const AggregatedCoefficients& coeffs) {
  cand.pair = {-coeffs.b / (2.0 * coeffs.c) * coeffs.t_bound, coeffs.t_bound};
  cand.clamped = true;
}

}  // namespace

Solution solve_aggregated(const AggregatedParams& input) {
  const AggregatedParams agg = validate(input);
  const AggregatedCoefficients coeffs = coefficients_aggregated(agg);

  Solution solution;
  CandidatePair leftover = candidate(coeffs, CaseLabel::kAggregatedCaseI, solution.warnings);
  CandidatePair stockout = candidate(coeffs, CaseLabel::kAggregatedCaseII, solution.warnings);

  const CandidatePair* chosen = nullptr;
  if (coeffs.t_bound <= 0.0) {
    // Case I is empty; the stock-out optimum is the answer.
    leftover.available = false;
    if (!stockout.available) {
      throw Error(ErrorCode::kNoInteriorOptimum, "solve_aggregated: case II has no interior optimum and case I is empty");
    }
    chosen = &stockout;
  } else {
    if (leftover.available && leftover.unclamped.t > coeffs.t_bound) clamp_to_boundary(leftover, coeffs);
    if (stockout.available && stockout.unclamped.t <= coeffs.t_bound) clamp_to_boundary(stockout, coeffs);
    if (!leftover.available && !stockout.available) {
      throw Error(ErrorCode::kNoInteriorOptimum, "solve_aggregated: neither case objective has an interior optimum");
    }
  }
  for (CandidatePair* cand : {&leftover, &stockout}) {
    if (cand->available) {
      cand->objective = generic_cost(coeffs.for_case(cand->case_label), cand->pair.t4, cand->pair.t);
    }
  }
  if (chosen == nullptr) {
    if (!stockout.available) {
      chosen = &leftover;
    } else if (!leftover.available) {
      chosen = &stockout;
    } else {
      chosen = leftover.objective <= stockout.objective ? &leftover : &stockout;
    }
  }

  const ProductionParams& plant = agg.plant;
  const DecisionPair pair = chosen->pair;
  const double x = plant.decay();
  const double lambda = plant.demand_rate;
  const double correction = x * pair.t4 * pair.t4 / 2.0;

  solution.optimum = pair;
  solution.case_label = chosen->case_label;
  solution.clamped = chosen->clamped;
  solution.total_cost = chosen->objective;
  solution.candidates = {leftover, stockout};

  CycleTimes& times = solution.times;
  times.t4 = pair.t4;
  times.total = pair.t;
  times.t2 = lambda / plant.net_production() * (pair.t4 + correction);
  const double rest = std::max(pair.t - times.t2 - pair.t4, 0.0);
  times.t1 = lambda / plant.good_rate() * rest;
  times.t5 = plant.net_production() / plant.good_rate() * rest;
  const double recovered = recovered_stock(pair.t4, pair.t, agg);
  times.t6 = central_depletion_time(recovered, plant);

  solution.levels = boundary_levels(times, plant);
  solution.levels.pooled_recovered = recovered;
  solution.production_time = lambda / plant.good_rate() * (pair.t + correction);
  solution.quantity = lambda / plant.good_fraction * (pair.t + correction);
  return solution;
}

}  // namespace epq
