#include "epq/trajectory.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <ostream>

#include <fmt/format.h>

#include "epq/aggregated.hpp"
#include "epq/optimizer.hpp"
#include "epq/series.hpp"

namespace epq {

using series::decay_area;
using series::decay_mean;
using series::growth_area;
using series::growth_mean;

std::string_view to_string(Phase phase) {
  switch (phase) {
    case Phase::kBacklogRecovery: return "P1";
    case Phase::kProduction: return "P2";
    case Phase::kRework: return "P3";
    case Phase::kDepletion: return "P4";
    case Phase::kShortage: return "P5";
    case Phase::kCentralDepletion: return "P6-central";
  }
  return "?";
}

namespace {

constexpr std::array<Phase, 5> kLocalPhases = {Phase::kBacklogRecovery, Phase::kProduction,
                                               Phase::kRework, Phase::kDepletion, Phase::kShortage};

double length_of(Phase phase, const CycleTimes& times) {
  switch (phase) {
    case Phase::kBacklogRecovery: return times.t1;
    case Phase::kProduction: return times.t2;
    case Phase::kRework: return times.t3;
    case Phase::kDepletion: return times.t4;
    case Phase::kShortage: return times.t5;
    case Phase::kCentralDepletion: break;
  }
  return 0.0;
}

// Stock at the end of production, I_s.
double end_of_production(double t2, const ProductionParams& plant) {
  return plant.net_production() * t2 * decay_mean(plant.decay() * t2);
}

// Peak stock implied by a depletion period of length t4, I_m.
double peak_from_depletion(double t4, const ProductionParams& plant) {
  return plant.demand_rate * t4 * growth_mean(plant.decay() * t4);
}

// Stock at the end of rework, starting from I_s.
double end_of_rework(double stock, double t3, const ProductionParams& plant) {
  const double x = plant.decay();
  return stock * std::exp(-x * t3) + plant.net_rework() * t3 * decay_mean(x * t3);
}

double imperfect_phase_level(Phase phase, double s, const CycleTimes& times,
                             const ProductionParams& plant) {
  const double defects = plant.defect_rate();
  switch (phase) {
    case Phase::kBacklogRecovery: return defects * s;
    case Phase::kProduction: return defects * (times.t1 + s);
    case Phase::kRework: return defects * (times.t1 + times.t2) - plant.rework_rate * s;
    default: return 0.0;
  }
}

// Removes -0.0 so the CSV never prints "-0".
double tidy(double v) { return v + 0.0; }

}  // namespace

double phase_level(Phase phase, double s, const CycleTimes& times, const ProductionParams& plant) {
  const double x = plant.decay();
  switch (phase) {
    case Phase::kBacklogRecovery: return plant.net_production() * (s - times.t1);
    case Phase::kProduction: return end_of_production(s, plant);
    case Phase::kRework: return end_of_rework(end_of_production(times.t2, plant), s, plant);
    case Phase::kDepletion:
      return peak_from_depletion(times.t4, plant) * std::exp(-x * s) -
             plant.demand_rate * s * decay_mean(x * s);
    case Phase::kShortage: return -plant.backlog_fraction * plant.demand_rate * s;
    case Phase::kCentralDepletion: break;
  }
  throw Error(ErrorCode::kDomain, "phase_level: the central phase has no serviceable level");
}

double serviceable_level(double t, const CycleTimes& times, const ProductionParams& plant) {
  const double slack = 1e-12 * std::max(1.0, times.total);
  if (!(t >= -slack && t <= times.total + slack)) {
    throw Error(ErrorCode::kDomain,
                fmt::format("serviceable_level: t = {} outside [0, {}]", t, times.total));
  }
  double start = 0.0;
  for (Phase phase : kLocalPhases) {
    const double len = length_of(phase, times);
    if (len > 0.0 && (t <= start + len || phase == Phase::kShortage)) {
      return phase_level(phase, std::clamp(t - start, 0.0, len), times, plant);
    }
    start += len;
  }
  return phase_level(Phase::kShortage, times.t5, times, plant);
}

InventoryLevels boundary_levels(const CycleTimes& times, const ProductionParams& plant) {
  InventoryLevels levels;
  levels.end_of_production = end_of_production(times.t2, plant);
  levels.peak = peak_from_depletion(times.t4, plant);
  levels.backlog = plant.net_production() * times.t1;
  levels.imperfect_peak = plant.defect_rate() * (times.t1 + times.t2);
  return levels;
}

double serviceable_stock_integral(const CycleTimes& times, const ProductionParams& plant) {
  const double x = plant.decay();
  const double stock = end_of_production(times.t2, plant);
  return plant.net_production() * times.t2 * times.t2 * decay_area(x * times.t2) +
         stock * times.t3 * decay_mean(x * times.t3) +
         plant.net_rework() * times.t3 * times.t3 * decay_area(x * times.t3) +
         plant.demand_rate * times.t4 * times.t4 * growth_area(x * times.t4);
}

CycleTimes exact_reduce(double t4, double t, const ProductionParams& plant) {
  if (!(t4 > 0.0 && t4 < t)) {
    throw Error(ErrorCode::kDomain, fmt::format("exact_reduce: need 0 < t4 < t (got {}, {})", t4, t));
  }
  const double lambda = plant.demand_rate;
  const double beta = plant.backlog_fraction;
  const double net = plant.net_production();
  const double peak = peak_from_depletion(t4, plant);
  const double span = t - t4;
  const optimizer::RootOptions tol{0.0, 1e-12 * lambda};

  CycleTimes times;
  times.t4 = t4;
  times.total = t;
  try {
    if (plant.good_fraction == 1.0) {
      // No defects: no rework, production alone must build the peak.
      auto gap = [&](double t2) { return peak - end_of_production(t2, plant); };
      times.t2 = optimizer::bracket_root(gap, 0.0, span, tol).root;
    } else {
      // Linear material balance: T2 = (omega*T3 + beta*lambda*(T4 - T)) / (alpha*p - lambda).
      const double omega = beta * lambda + (plant.good_rate() - plant.lost_fraction() * lambda) *
                                               plant.rework_rate / plant.defect_rate();
      auto production_for = [&](double t3) { return (omega * t3 + beta * lambda * (t4 - t)) / net; };
      auto gap = [&](double t3) {
        return peak - end_of_rework(end_of_production(production_for(t3), plant), t3, plant);
      };
      times.t3 = optimizer::bracket_root(gap, 0.0, span, tol).root;
      times.t2 = production_for(times.t3);
    }
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kNoSignChange) throw;
    throw Error(ErrorCode::kNoRoot,
                fmt::format("exact_reduce: no cycle split for (t4, t) = ({}, {})", t4, t));
  }

  const double rest = t - times.t2 - times.t3 - t4;
  const double slack = 1e-12 * t;
  if (times.t2 < -slack || rest < -slack) {
    throw Error(ErrorCode::kNegativePeriod,
                fmt::format("exact_reduce: (t4, t) = ({}, {}) implies T2 = {}, T1 + T5 = {}", t4, t,
                            times.t2, rest));
  }
  times.t2 = std::max(times.t2, 0.0);
  const double shared = std::max(rest, 0.0) / (plant.good_rate() - plant.lost_fraction() * lambda);
  times.t1 = beta * lambda * shared;
  times.t5 = net * shared;
  return times;
}

CycleTimes exact_reduce_local(double t4, double t, const ProductionParams& plant) {
  if (!(t4 > 0.0 && t4 < t)) {
    throw Error(ErrorCode::kDomain,
                fmt::format("exact_reduce_local: need 0 < t4 < t (got {}, {})", t4, t));
  }
  const double x = plant.decay();
  const double net = plant.net_production();
  const double peak = peak_from_depletion(t4, plant);
  const double u = x * peak / net;  // share of the saturation level reached
  if (!(u < 1.0)) {
    throw Error(ErrorCode::kNoRoot,
                fmt::format("exact_reduce_local: peak {} unreachable by production", peak));
  }
  CycleTimes times;
  times.t4 = t4;
  times.total = t;
  // T2 = -ln(1 - u)/x
  times.t2 = std::abs(u) < series::kThreshold ? (peak / net) * (1.0 + u / 2.0 + u * u / 3.0)
                                              : -std::log1p(-u) / x;
  const double rest = t - times.t2 - t4;
  if (rest < -1e-12 * t) {
    throw Error(ErrorCode::kNegativePeriod,
                fmt::format("exact_reduce_local: (t4, t) = ({}, {}) implies T1 + T5 = {}", t4, t, rest));
  }
  times.t1 = plant.demand_rate / plant.good_rate() * std::max(rest, 0.0);
  times.t5 = net / plant.good_rate() * std::max(rest, 0.0);
  return times;
}

double exact_cost_basic(double t4, double t, const ProductionParams& plant, const CostParams& costs) {
  const CycleTimes times = exact_reduce(t4, t, plant);
  const double lambda = plant.demand_rate;
  const double gamma = plant.screening_fraction;
  const double beta = plant.backlog_fraction;

  // Units screened out as deteriorated over the cycle.
  const double screened = plant.net_production() * times.t2 + plant.net_rework() * times.t3 -
                          lambda * times.t4;
  const double deterioration =
      (costs.deterioration + (1.0 - gamma) / gamma * costs.deteriorated_sale) * screened;
  const double holding = costs.holding_serviceable * serviceable_stock_integral(times, plant);
  const double imperfect = costs.holding_imperfect *
                           (times.t1 + times.t2 + times.t3) * plant.rework_rate * times.t3 / 2.0;
  const double scrap =
      costs.scrap * (1.0 - plant.recovery_fraction) * plant.rework_rate * times.t3;
  const double shortage = costs.shortage * (plant.net_production() * times.t1 * times.t1 +
                                            beta * lambda * times.t5 * times.t5) / 2.0;
  const double lost = costs.lost_sale * plant.lost_fraction() * lambda * times.t5;
  return (deterioration + holding + imperfect + costs.setup + scrap + shortage + lost) / t;
}

double central_depletion_time(double recovered, const ProductionParams& plant) {
  return recovered / (plant.demand_rate + recovered * plant.decay());
}

double central_level(double t, double recovered, const ProductionParams& plant) {
  return std::max(0.0, recovered * (1.0 - plant.decay() * t) - plant.demand_rate * t);
}

double central_cost_leftover(double recovered, double cycle, const AggregatedParams& agg) {
  const double lambda = agg.plant.demand_rate;
  const double x = agg.plant.decay();
  const double held = recovered * cycle - (lambda + recovered * x) * cycle * cycle / 2.0;
  const double leftover = recovered * (1.0 - x * cycle) - lambda * cycle;
  return agg.holding_central * held + agg.leftover_sale * leftover + agg.central_setup;
}

double central_cost_stockout(double recovered, double cycle, const AggregatedParams& agg) {
  const double lambda = agg.plant.demand_rate;
  const double depletion = central_depletion_time(recovered, agg.plant);
  const double held = recovered * recovered / (2.0 * (lambda + recovered * agg.plant.decay()));
  return agg.holding_central * held + agg.costs.lost_sale * lambda * (cycle - depletion) +
         agg.central_setup;
}

double central_cost(double recovered, double cycle, const AggregatedParams& agg) {
  if (central_depletion_time(recovered, agg.plant) >= cycle) {
    return central_cost_leftover(recovered, cycle, agg);
  }
  return central_cost_stockout(recovered, cycle, agg);
}

double exact_cost_aggregated(double t4, double t, const AggregatedParams& agg) {
  if (!(t4 > 0.0 && t4 < t)) {
    throw Error(ErrorCode::kDomain,
                fmt::format("exact_cost_aggregated: need 0 < t4 < t (got {}, {})", t4, t));
  }
  const ProductionParams& plant = agg.plant;
  const CostParams& costs = agg.costs;
  const double lambda = plant.demand_rate;
  const double x = plant.decay();
  const double good = plant.good_rate();
  const double net = plant.net_production();

  const double deterioration =
      deterioration_weight(plant, costs) * lambda * plant.deterioration_rate * t4 * t4 / 2.0;
  const double holding = costs.holding_serviceable * (lambda / net) *
                         (good * t4 * t4 + x * lambda * t4 * t4 * t4) / 2.0;
  const double produced = lambda * t / good + x * lambda * t4 * t4 / (2.0 * good);
  const double imperfect = costs.holding_imperfect * plant.defect_rate() / 2.0 * produced * produced;
  const double unmet = t - (good * t4 + x * lambda * t4 * t4 / 2.0) / net;
  const double shortage = costs.shortage * lambda / 2.0 * (net / good) * unmet * unmet;
  const double local = deterioration + holding + imperfect + costs.setup + shortage;

  const double recovered = recovered_stock(t4, t, agg);
  return (agg.plants * local + central_cost(recovered, t, agg)) / t;
}

optimizer::MinimizeReport minimize_exact_basic(const ProductionParams& plant, const CostParams& costs,
                                               DecisionPair seed, double tol) {
  const double penalty = 1e6 * exact_cost_basic(seed.t4, seed.t, plant, costs);
  auto objective = [&](double t4, double t) {
    if (!(t4 > 0.0 && t4 < t)) return penalty;
    try {
      return exact_cost_basic(t4, t, plant, costs);
    } catch (const Error&) {
      return penalty;
    }
  };
  optimizer::MinimizeOptions options;
  options.tol = tol;
  return optimizer::minimize_2d(objective, {seed.t4, seed.t}, options);
}

optimizer::MinimizeReport minimize_exact_aggregated(const AggregatedParams& agg, DecisionPair seed,
                                                    double tol) {
  const double penalty = 1e6 * exact_cost_aggregated(seed.t4, seed.t, agg);
  auto objective = [&](double t4, double t) {
    if (!(t4 > 0.0 && t4 < t)) return penalty;
    return exact_cost_aggregated(t4, t, agg);
  };
  optimizer::MinimizeOptions options;
  options.tol = tol;
  return optimizer::minimize_2d(objective, {seed.t4, seed.t}, options);
}

std::vector<PhasePoint> sample_trajectory(const Solution& solution, const ProductionParams& plant,
                                          double step) {
  if (!(step > 0.0)) {
    throw Error(ErrorCode::kDomain, fmt::format("sample_trajectory: step must be > 0 (got {})", step));
  }
  const bool aggregated = solution.case_label == CaseLabel::kAggregatedCaseI ||
                          solution.case_label == CaseLabel::kAggregatedCaseII;
  CycleTimes times = solution.times;
  try {
    times = aggregated ? exact_reduce_local(solution.optimum.t4, solution.optimum.t, plant)
                       : exact_reduce(solution.optimum.t4, solution.optimum.t, plant);
  } catch (const Error&) {
    // keep the approximate split
  }
  const double recovered = solution.levels.pooled_recovered.value_or(0.0);
  // NaN when there is no central plant, so every comparison below fails.
  const double depletion = aggregated ? central_depletion_time(recovered, plant)
                                      : std::numeric_limits<double>::quiet_NaN();

  std::vector<PhasePoint> points;
  auto emit = [&](double t, Phase phase, double s) {
    points.push_back({tidy(t), phase, tidy(phase_level(phase, s, times, plant)),
                      tidy(imperfect_phase_level(phase, s, times, plant)),
                      aggregated ? tidy(central_level(t, recovered, plant)) : 0.0});
  };

  double start = 0.0;
  for (Phase phase : kLocalPhases) {
    const double len = length_of(phase, times);
    if (!(len > 0.0)) continue;
    const double end = start + len;
    emit(start, phase, 0.0);
    for (auto k = static_cast<long long>(std::floor(start / step)) + 1;; ++k) {
      const double t = static_cast<double>(k) * step;
      if (t >= end) break;
      if (depletion > start && depletion < end && points.back().t < depletion && t > depletion) {
        emit(depletion, phase, depletion - start);
        points.back().phase = Phase::kCentralDepletion;
      }
      if (t > start) emit(t, phase, t - start);
    }
    if (depletion > points.back().t && depletion < end) {
      emit(depletion, phase, depletion - start);
      points.back().phase = Phase::kCentralDepletion;
    }
    emit(end, phase, len);
    start = end;
  }
  return points;
}

void write_trajectory_csv(std::ostream& out, std::span<const PhasePoint> points) {
  out << "t,phase,serviceable,imperfect,recovered\n";
  for (const PhasePoint& p : points) {
    out << fmt::format("{:.9g},{},{:.9g},{:.9g},{:.9g}\n", tidy(p.t), to_string(p.phase),
                       tidy(p.serviceable), tidy(p.imperfect), tidy(p.recovered));
  }
}

}  // namespace epq
