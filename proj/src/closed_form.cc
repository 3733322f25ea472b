#include "epq/closed_form.hpp"

#include <cmath>
#include <optional>

#include <fmt/format.h>

#include "epq/trajectory.hpp"

namespace epq {
namespace {

// Fraction of the cycle-limited slack that small negative periods may use
// before the split counts as infeasible.
constexpr double kPeriodSlack = 1e-12;

// Gamma*theta*T above which the series truncation is no longer trusted.
constexpr double kTruncationWarning = 0.3;

struct RawSplit {
  double t2;
  double t3;
  double rest;  // T1 + T5, left for backlog make-up and shortage
};

RawSplit raw_split(double t4, double t, const ProductionParams& plant, ReworkTerm term) {
  const double lambda = plant.demand_rate;
  const double beta = plant.backlog_fraction;
  const double net = plant.net_production();
  const double defects = plant.defect_rate();
  // Material balance, scaled by (1 - alpha)p so that alpha = 1 stays finite:
  //   defects*net*T2 - [defects*beta*lambda + (alpha p - beta' lambda) p_r]*T3
  //     = defects*beta*lambda*(T4 - T)
  const double a11 = defects * net;
  const double a12 =
      -(defects * beta * lambda + (plant.good_rate() - plant.lost_fraction() * lambda) * plant.rework_rate);
  const double r1 = defects * beta * lambda * (t4 - t);
  // Rework balance: net*T2 + (alpha_r p_r - lambda)*T3 = lambda*(T4 [+ gamma theta T4^2/2])
  const double a21 = net;
  const double a22 = plant.net_rework();
  const double correction = term == ReworkTerm::kQuadratic ? plant.decay() * t4 * t4 / 2.0 : 0.0;
  const double r2 = lambda * (t4 + correction);

  const double det = a11 * a22 - a12 * a21;
  const double t2 = (r1 * a22 - a12 * r2) / det;
  const double t3 = (a11 * r2 - a21 * r1) / det;
  return {t2, t3, t - t2 - t3 - t4};
}

bool feasible(const RawSplit& split, double t) {
  const double slack = -kPeriodSlack * t;
  return split.t2 >= slack && split.t3 >= slack && split.rest >= slack;
}

std::optional<double> partial_objective(double t4, double t, const ProductionParams& plant,
                                        const CostParams& costs) {
  const RawSplit split = raw_split(t4, t, plant, ReworkTerm::kLinear);
  if (!(t > 0.0) || !feasible(split, t)) return std::nullopt;

  const double lambda = plant.demand_rate;
  const double beta = plant.backlog_fraction;
  const double net = plant.net_production();
  const double waiting = plant.good_rate() - plant.lost_fraction() * lambda;
  const double t2 = split.t2;
  const double t3 = split.t3;
  const double rest = split.rest;

  const double deterioration =
      deterioration_weight(plant, costs) * lambda * plant.deterioration_rate * t4 * t4 / 2.0;
  const double holding =
      costs.holding_serviceable * (net * t2 * t2 / 2.0 + net * t2 * t3 +
                                   plant.net_rework() * t3 * t3 / 2.0 + lambda * t4 * t4 / 2.0);
  const double rework = plant.rework_rate;
  const double imperfect =
      t3 == 0.0 ? 0.0
                : costs.holding_imperfect * (rework * rework + plant.defect_rate() * rework) * t3 * t3 /
                      (2.0 * plant.defect_rate());
  const double scrap = costs.scrap * (1.0 - plant.recovery_fraction) * rework * t3;
  const double shortage = costs.shortage * net * beta * lambda / (2.0 * waiting) * rest * rest;
  const double lost = costs.lost_sale * net * plant.lost_fraction() * lambda / waiting * rest;
  return (deterioration + holding + imperfect + costs.setup + scrap + shortage + lost) / t;
}

DecisionPair fallback_seed(const ProductionParams& plant, const CostParams& costs) {
  const double rate = (costs.holding_serviceable + costs.shortage) * plant.demand_rate;
  const double t = rate > 0.0 ? std::sqrt(2.0 * costs.setup / rate) : 1.0;
  return {0.6 * t, t};
}

}  // namespace

ReducedTimes approx_reduce(double t4, double t, const ProductionParams& plant, ReworkTerm term) {
  const RawSplit split = raw_split(t4, t, plant, term);
  if (!feasible(split, t)) {
    throw Error(ErrorCode::kNegativePeriod,
                fmt::format("approx_reduce: (t4, t) = ({}, {}) gives T2 = {}, T3 = {}, T1 + T5 = {}",
                            t4, t, split.t2, split.t3, split.rest));
  }
  return {std::max(split.t2, 0.0), std::max(split.t3, 0.0)};
}

CycleTimes complete_times(DecisionPair pair, ReducedTimes reduced, const ProductionParams& plant) {
  const double lambda = plant.demand_rate;
  const double waiting = plant.good_rate() - plant.lost_fraction() * lambda;
  const double rest = std::max(pair.t - reduced.t2 - reduced.t3 - pair.t4, 0.0);
  CycleTimes times;
  times.t1 = plant.backlog_fraction * lambda / waiting * rest;
  times.t2 = reduced.t2;
  times.t3 = reduced.t3;
  times.t4 = pair.t4;
  times.t5 = plant.net_production() / waiting * rest;
  times.total = pair.t;
  return times;
}

double approx_cost_partial(double t4, double t, const ProductionParams& plant, const CostParams& costs) {
  if (!(t > 0.0)) {
    throw Error(ErrorCode::kDomain, fmt::format("approx_cost_partial: t must be > 0 (got {})", t));
  }
  const std::optional<double> value = partial_objective(t4, t, plant, costs);
  if (!value) {
    const RawSplit split = raw_split(t4, t, plant, ReworkTerm::kLinear);
    throw Error(ErrorCode::kNegativePeriod,
                fmt::format("approx_cost_partial: (t4, t) = ({}, {}) gives T2 = {}, T3 = {}, T1 + T5 = {}",
                            t4, t, split.t2, split.t3, split.rest));
  }
  return *value;
}

GenericCoefficients coefficients_complete(const ProductionParams& plant, const CostParams& costs) {
  if (!plant.complete_backlog()) {
    throw Error(ErrorCode::kInvalidParameter,
                fmt::format("coefficients_complete: requires beta = 1 (got {})", plant.backlog_fraction));
  }
  const double alpha = plant.good_fraction;
  const double p = plant.production_rate;
  const double lambda = plant.demand_rate;
  const double rework = plant.rework_rate;
  const double good = plant.good_rate();
  const double net = plant.net_production();
  const double net_rework = plant.net_rework();
  const double recovered_share = alpha + (1.0 - alpha) * plant.recovery_fraction;
  const double eta = (1.0 - alpha) * lambda / (rework * recovered_share);
  const double mix = (1.0 - eta) * net + eta * net_rework;

  GenericCoefficients k;
  // (p_r^2 + (1-alpha) p p_r) eta^2 / (2 (1-alpha) p), rearranged to stay finite at alpha = 1.
  const double imperfect = ((1.0 - alpha) * lambda * lambda / (p * recovered_share * recovered_share) +
                            rework * eta * eta) / 2.0;
  k.a = costs.holding_serviceable *
            (net_rework * net_rework * eta * eta / (2.0 * net) - net_rework * eta * eta / 2.0) +
        costs.holding_imperfect * imperfect + costs.shortage * lambda * mix * mix / (2.0 * good * net);
  k.b = costs.holding_serviceable * (lambda * eta - net_rework * lambda * eta / net) -
        costs.shortage * lambda * mix / net;
  k.c = deterioration_weight(plant, costs) * lambda * plant.deterioration_rate / 2.0 +
        costs.holding_serviceable * (lambda * lambda / (2.0 * net) + lambda / 2.0) +
        costs.shortage * good * lambda / (2.0 * net);
  k.d = costs.scrap * (1.0 - plant.recovery_fraction) * rework * eta;
  k.k = costs.setup;
  k.eta = eta;
  if (alpha < 1.0) k.omega = lambda + alpha * rework / (1.0 - alpha);
  return k;
}

double generic_cost(const GenericCoefficients& coeffs, double t4, double t) {
  if (!(t > 0.0)) {
    throw Error(ErrorCode::kDomain, fmt::format("generic_cost: t must be > 0 (got {})", t));
  }
  return coeffs.a * t + coeffs.b * t4 + coeffs.c * t4 * t4 / t + coeffs.k / t + coeffs.d;
}

DecisionPair solve_closed_form(const GenericCoefficients& coeffs) {
  const double disc = 4.0 * coeffs.a * coeffs.c - coeffs.b * coeffs.b;
  if (!(coeffs.b < 0.0) || !(disc > 0.0) || !(coeffs.k > 0.0) || !std::isfinite(disc)) {
    throw Error(ErrorCode::kNoInteriorOptimum,
                fmt::format("no interior optimum: need B < 0 and 4AC > B^2 (A = {}, B = {}, C = {}, K = {})",
                            coeffs.a, coeffs.b, coeffs.c, coeffs.k));
  }
  return {-coeffs.b * std::sqrt(coeffs.k / (coeffs.c * disc)), 2.0 * std::sqrt(coeffs.c * coeffs.k / disc)};
}

HessianCheck hessian_check(const GenericCoefficients& coeffs, double t4, double t) {
  if (!(t > 0.0)) {
    throw Error(ErrorCode::kDomain, fmt::format("hessian_check: t must be > 0 (got {})", t));
  }
  const double c = coeffs.c;
  HessianCheck h;
  h.matrix[0][0] = 2.0 * c / t;
  h.matrix[0][1] = h.matrix[1][0] = -2.0 * c * t4 / (t * t);
  h.matrix[1][1] = 2.0 * coeffs.k / (t * t * t) + 2.0 * c * t4 * t4 / (t * t * t);
  h.leading_minor = h.matrix[0][0];
  h.determinant = h.matrix[0][0] * h.matrix[1][1] - h.matrix[0][1] * h.matrix[1][0];
  h.positive_definite = h.leading_minor > 0.0 && h.determinant > 0.0;
  return h;
}

Solution solve_basic(const ProductionParams& plant, const CostParams& costs, const SolveOptions& options) {
  validate(plant, costs);
  Solution solution;

  if (plant.complete_backlog() && !options.force_partial) {
    const GenericCoefficients coeffs = coefficients_complete(plant, costs);
    solution.optimum = solve_closed_form(coeffs);
    solution.total_cost = generic_cost(coeffs, solution.optimum.t4, solution.optimum.t);
    solution.case_label = CaseLabel::kBasicComplete;
  } else {
    ProductionParams complete = plant;
    complete.backlog_fraction = 1.0;
    DecisionPair seed;
    try {
      seed = solve_closed_form(coefficients_complete(complete, costs));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kNoInteriorOptimum) throw;
      seed = fallback_seed(plant, costs);
      solution.warnings.push_back("complete-backlog closed form unavailable; seeded from setup/holding scale");
    }
    if (!partial_objective(seed.t4, seed.t, plant, costs)) {
      // Walk the depletion share until the seed yields a valid split.
      bool found = false;
      for (double scale : {1.0, 2.0, 0.5, 4.0}) {
        for (int i = 19; i >= 1 && !found; --i) {
          const DecisionPair probe{0.05 * i * seed.t * scale, seed.t * scale};
          if (partial_objective(probe.t4, probe.t, plant, costs)) {
            seed = probe;
            found = true;
          }
        }
        if (found) break;
      }
      if (!found) {
        throw Error(ErrorCode::kMinimizerFailed, "solve_basic: no feasible starting point for the partial model");
      }
    }
    const double t_cap = 10.0 * seed.t;
    const double penalty = 1e6 * *partial_objective(seed.t4, seed.t, plant, costs);
    auto objective = [&](double t4, double t) {
      if (!(t4 > 0.0 && t4 < t && t <= t_cap)) return penalty;
      return partial_objective(t4, t, plant, costs).value_or(penalty);
    };
    optimizer::MinimizeOptions minimize;
    minimize.tol = options.tol;
    const optimizer::MinimizeReport report = optimizer::minimize_2d(objective, {seed.t4, seed.t}, minimize);
    if (!report.converged || !(report.value < penalty)) {
      throw Error(ErrorCode::kMinimizerFailed,
                  fmt::format("solve_basic: minimizer stopped after {} evaluations without converging",
                              report.probe_count));
    }
    solution.optimum = {report.point[0], report.point[1]};
    solution.total_cost = report.value;
    solution.case_label = CaseLabel::kBasicPartial;
  }

  const DecisionPair& pair = solution.optimum;
  // The numeric path may stop on the T1 + T5 = 0 edge of the linear split, so
  // it reports that split rather than the quadratic one.
  const ReworkTerm term = solution.case_label == CaseLabel::kBasicPartial ? ReworkTerm::kLinear
                                                                           : ReworkTerm::kQuadratic;
  solution.times = complete_times(pair, approx_reduce(pair.t4, pair.t, plant, term), plant);
  solution.levels = boundary_levels(solution.times, plant);
  solution.production_time = solution.times.t1 + solution.times.t2;
  solution.quantity = plant.production_rate * solution.production_time;
  if (plant.complete_backlog()) {
    const double share = plant.good_fraction + (1.0 - plant.good_fraction) * plant.recovery_fraction;
    solution.production_time_proportional = plant.demand_rate * pair.t / (plant.production_rate * share);
  }
  if (plant.decay() * pair.t > kTruncationWarning) {
    solution.warnings.push_back(fmt::format(
        "gamma*theta*T = {:.4g} exceeds {}; the series truncation may be inaccurate",
        plant.decay() * pair.t, kTruncationWarning));
  }
  return solution;
}

}  // namespace epq
