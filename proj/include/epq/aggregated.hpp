#ifndef EPQ_AGGREGATED_HPP
#define EPQ_AGGREGATED_HPP

#include "epq/model.hpp"

namespace epq {

/// Coefficients of the two case objectives
///   TC_i = a_i*T + b*T4 + c*T4^2/T + k/T + d_i,
/// case I (recovered stock left over at cycle end) and case II (stock-out).
struct AggregatedCoefficients {
  double a1 = 0.0;
  double a2 = 0.0;
  double b = 0.0;
  double c = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
  double k = 0.0;
  double t_bound = 0.0;  // largest cycle length of case I; may be <= 0

  GenericCoefficients for_case(CaseLabel label) const;
};

AggregatedCoefficients coefficients_aggregated(const AggregatedParams& agg);

/// Pooled recovered stock delivered to the central plant each cycle.
double recovered_stock(double t4, double t, const AggregatedParams& agg);

/// Runs the case-selection procedure: closed-form optimum of each case
/// objective, clamping to the case boundary when a case optimum violates its
/// own condition, and picking the cheaper candidate.
Solution solve_aggregated(const AggregatedParams& agg);

}  // namespace epq

#endif  // EPQ_AGGREGATED_HPP
