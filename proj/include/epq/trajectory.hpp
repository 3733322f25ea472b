#ifndef EPQ_TRAJECTORY_HPP
#define EPQ_TRAJECTORY_HPP

#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "epq/model.hpp"
#include "epq/optimizer.hpp"

namespace epq {

enum class Phase {
  kBacklogRecovery,   // P1
  kProduction,        // P2
  kRework,            // P3
  kDepletion,         // P4
  kShortage,          // P5
  kCentralDepletion,  // central stock runs out (aggregated, stock-out case)
};

std::string_view to_string(Phase phase);

struct PhasePoint {
  double t = 0.0;
  Phase phase = Phase::kBacklogRecovery;
  double serviceable = 0.0;  // negative while backlogged
  double imperfect = 0.0;
  double recovered = 0.0;    // central plant; zero for a single plant
};

/// Serviceable stock `local_t` time units into `phase`, given the cycle split.
/// Starting levels are derived from the split itself (backlog from T1, peak
/// from T4), so the value is continuous across boundaries only when the split
/// satisfies the exact stock balance.
double phase_level(Phase phase, double local_t, const CycleTimes& times,
                   const ProductionParams& plant);

/// Signed serviceable stock at absolute cycle time t in [0, times.total].
double serviceable_level(double t, const CycleTimes& times, const ProductionParams& plant);

InventoryLevels boundary_levels(const CycleTimes& times, const ProductionParams& plant);

/// Integral of the positive serviceable stock over production, rework and
/// depletion.
double serviceable_stock_integral(const CycleTimes& times, const ProductionParams& plant);

/// Cycle split consistent with the untruncated stock equations: the linear
/// material balance fixes T2 in terms of T3, and T3 is the root of the
/// continuity condition between the rework and depletion phases.
/// Throws kNoRoot when no split exists and kNegativePeriod when the root
/// implies a negative period.
CycleTimes exact_reduce(double t4, double t, const ProductionParams& plant);

/// Cycle split for a local plant of the aggregated system (no rework phase,
/// complete backlogging). T2 is the closed-form root of I_s = I_m.
CycleTimes exact_reduce_local(double t4, double t, const ProductionParams& plant);

/// Total cost per unit time of the single-plant model with no series
/// truncation anywhere.
double exact_cost_basic(double t4, double t, const ProductionParams& plant, const CostParams& costs);

/// Depletion time of `recovered` units at the central plant.
double central_depletion_time(double recovered, const ProductionParams& plant);
/// Recovered stock at the central plant t time units after delivery; zero
/// once depleted.
double central_level(double t, double recovered, const ProductionParams& plant);
/// Central plant cost per cycle when stock is left over at cycle end.
double central_cost_leftover(double recovered, double cycle, const AggregatedParams& agg);
/// Central plant cost per cycle when stock runs out before cycle end.
double central_cost_stockout(double recovered, double cycle, const AggregatedParams& agg);
/// Central plant cost per cycle; the regime is picked from the depletion time.
double central_cost(double recovered, double cycle, const AggregatedParams& agg);

/// Aggregated total cost per unit time before the small-T4 simplification.
double exact_cost_aggregated(double t4, double t, const AggregatedParams& agg);

/// Numerical minimum of exact_cost_basic, seeded at `seed` (which must have
/// an exact split). Pairs without a split score 1e6 times the seed cost.
optimizer::MinimizeReport minimize_exact_basic(const ProductionParams& plant, const CostParams& costs,
                                               DecisionPair seed, double tol = optimizer::kNestedTol);

/// Numerical minimum of exact_cost_aggregated over 0 < t4 < t.
optimizer::MinimizeReport minimize_exact_aggregated(const AggregatedParams& agg, DecisionPair seed,
                                                    double tol = optimizer::kNestedTol);

/// Samples one cycle of the solution every `step`, plus both sides of every
/// phase boundary. The split is recomputed from the optimal pair with the
/// exact reduction so the serviceable curve is continuous; it falls back to
/// `solution.times` when no exact split exists.
std::vector<PhasePoint> sample_trajectory(const Solution& solution, const ProductionParams& plant,
                                          double step);

void write_trajectory_csv(std::ostream& out, std::span<const PhasePoint> points);

}  // namespace epq

#endif  // EPQ_TRAJECTORY_HPP
