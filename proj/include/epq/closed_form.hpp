#ifndef EPQ_CLOSED_FORM_HPP
#define EPQ_CLOSED_FORM_HPP

#include <array>

#include "epq/model.hpp"
#include "epq/optimizer.hpp"

namespace epq {

/// Whether the rework-balance reduction keeps the second-order decay
/// correction lambda*gamma*theta*T4^2/2.
enum class ReworkTerm {
  kQuadratic,  // used to report the period split at the optimum
  kLinear,     // used inside the reduced objectives
};

struct ReducedTimes {
  double t2 = 0.0;
  double t3 = 0.0;
};

/// Solves the 2x2 linear system formed by the material balance and the
/// series-truncated rework balance for (T2, T3). Throws kNegativePeriod when
/// any of T1, T2, T3, T5 would be negative.
ReducedTimes approx_reduce(double t4, double t, const ProductionParams& plant,
                           ReworkTerm term = ReworkTerm::kQuadratic);

/// Completes a reduced split with T1 and T5 from the backlog balance.
CycleTimes complete_times(DecisionPair pair, ReducedTimes reduced, const ProductionParams& plant);

/// Reduced total cost per unit time for any backlog fraction.
double approx_cost_partial(double t4, double t, const ProductionParams& plant, const CostParams& costs);

/// Coefficients of the complete-backlog reduced objective. Requires beta == 1.
GenericCoefficients coefficients_complete(const ProductionParams& plant, const CostParams& costs);

double generic_cost(const GenericCoefficients& coeffs, double t4, double t);

/// Stationary point of the generic objective. Throws kNoInteriorOptimum
/// unless b < 0, 4ac > b^2 and k > 0.
DecisionPair solve_closed_form(const GenericCoefficients& coeffs);

struct HessianCheck {
  std::array<std::array<double, 2>, 2> matrix{};
  double leading_minor = 0.0;
  double determinant = 0.0;
  bool positive_definite = false;
};

HessianCheck hessian_check(const GenericCoefficients& coeffs, double t4, double t);

struct SolveOptions {
  bool force_partial = false;  // route beta == 1 through the numeric path
  double tol = optimizer::kPolynomialTol;
};

/// Solves the single-plant model. Complete backlogging uses the closed form;
/// partial backlogging minimizes the reduced objective numerically, seeded at
/// the complete-backlog optimum.
Solution solve_basic(const ProductionParams& plant, const CostParams& costs,
                     const SolveOptions& options = {});

}  // namespace epq

#endif  // EPQ_CLOSED_FORM_HPP
