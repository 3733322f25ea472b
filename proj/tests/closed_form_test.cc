#include <cmath>
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "epq/closed_form.hpp"
#include "epq/optimizer.hpp"
#include "epq/trajectory.hpp"
#include "support.hpp"

namespace epq {
namespace {

using testing::reference_costs;
using testing::reference_plant;
using testing::rel_diff;

template <class Rng>
GenericCoefficients random_coefficients(Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  GenericCoefficients co;
  co.c = std::pow(10.0, 1 + 5 * u(rng));
  co.b = -std::pow(10.0, 1 + 5 * u(rng));
  // 4ac > b^2 with some margin.
  co.a = co.b * co.b / (4 * co.c) * (1.05 + 10 * u(rng));
  co.k = std::pow(10.0, 1 + 3 * u(rng));
  co.d = 1000 * u(rng);
  return co;
}

TEST(ApproxReduce, ReferencePair) {
  const ReducedTimes r = approx_reduce(0.1996, 0.2891, reference_plant());
  EXPECT_NEAR(r.t2, 0.0519, 5e-5);
  EXPECT_NEAR(r.t3, 0.0247, 5e-5);
}

TEST(ApproxReduce, ZeroDepletionIsInfeasible) {
  try {
    approx_reduce(0.0, 0.3, reference_plant());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNegativePeriod);
  }
}

TEST(ApproxReduce, SatisfiesBothBalances) {
  const ProductionParams plant = reference_plant();
  const ReducedTimes r = approx_reduce(0.2, 0.29, plant);
  const CycleTimes times = complete_times({0.2, 0.29}, r, plant);
  EXPECT_NEAR(plant.defect_rate() * (times.t1 + times.t2), plant.rework_rate * times.t3, 1e-9);
  EXPECT_NEAR(3200 * r.t2 + 1400 * r.t3, 1000 * (0.2 + 0.06 * 0.04 / 2), 1e-9);
  EXPECT_NEAR(times.sum(), 0.29, 1e-12);
}

TEST(CoefficientsComplete, ReferenceValues) {
  const GenericCoefficients co = coefficients_complete(reference_plant(), reference_costs());
  ASSERT_TRUE(co.eta && co.omega);
  EXPECT_NEAR(*co.eta, 0.085227, 1e-6);
  EXPECT_NEAR(*co.omega, 10333.33, 0.01);
  EXPECT_NEAR(co.a, 69233.4, 0.1);
  EXPECT_NEAR(co.b, -190172.3, 0.1);
  EXPECT_NEAR(co.c, 137731.25, 0.01);
  EXPECT_NEAR(co.d, 4090.9, 0.05);
  EXPECT_EQ(co.k, 300);
}

TEST(CoefficientsComplete, NoScrapCostMeansNoConstant) {
  CostParams costs = reference_costs();
  costs.scrap = 0;
  EXPECT_EQ(coefficients_complete(reference_plant(), costs).d, 0.0);
}

TEST(CoefficientsComplete, RejectsPartialBacklog) {
  ProductionParams plant = reference_plant();
  plant.backlog_fraction = 0.9;
  EXPECT_THROW(coefficients_complete(plant, reference_costs()), Error);
}

TEST(CoefficientsComplete, NoDefectsStaysFinite) {
  ProductionParams plant = reference_plant();
  plant.good_fraction = 1.0;
  const GenericCoefficients co = coefficients_complete(plant, reference_costs());
  EXPECT_TRUE(std::isfinite(co.a) && std::isfinite(co.b) && std::isfinite(co.c));
  EXPECT_FALSE(co.omega.has_value());
  EXPECT_EQ(*co.eta, 0.0);
}

TEST(GenericCost, Arithmetic) {
  GenericCoefficients co;
  co.a = 1;
  co.c = 1;
  co.k = 1;
  EXPECT_DOUBLE_EQ(generic_cost(co, 0, 1), 2.0);
  EXPECT_THROW(generic_cost(co, 0, 0), Error);
}

TEST(GenericCost, ReferenceValue) {
  const GenericCoefficients co = coefficients_complete(reference_plant(), reference_costs());
  EXPECT_NEAR(generic_cost(co, 0.19961, 0.28913), 6166, 1);
}

TEST(GenericCost, LinearInCoefficients) {
  std::mt19937_64 rng(1);
  GenericCoefficients co = random_coefficients(rng);
  GenericCoefficients scaled = co;
  scaled.a *= 7;
  scaled.b *= 7;
  scaled.c *= 7;
  scaled.k *= 7;
  for (auto [t4, t] : {std::pair{0.1, 0.3}, std::pair{1.0, 2.0}}) {
    EXPECT_NEAR(generic_cost(scaled, t4, t) - co.d, 7 * (generic_cost(co, t4, t) - co.d),
                1e-9 * generic_cost(scaled, t4, t));
  }
}

TEST(SolveClosedForm, ReferencePair) {
  const DecisionPair pair = solve_closed_form(coefficients_complete(reference_plant(), reference_costs()));
  EXPECT_NEAR(pair.t4, 0.1996, 5e-5);
  EXPECT_NEAR(pair.t, 0.2891, 5e-5);
}

TEST(SolveClosedForm, RejectsMissingInteriorOptimum) {
  GenericCoefficients co;
  co.a = 1;
  co.c = 1;
  co.k = 1;
  co.b = 0;
  EXPECT_THROW(solve_closed_form(co), Error);
  co.b = -2;  // 4ac == b^2
  EXPECT_THROW(solve_closed_form(co), Error);
  co.b = -1;
  EXPECT_NO_THROW(solve_closed_form(co));
}

TEST(SolveClosedFormProperty, AgreesWithNumericMinimum) {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 200; ++i) {
    const GenericCoefficients co = random_coefficients(rng);
    const DecisionPair pair = solve_closed_form(co);
    auto f = [&](double t4, double t) { return t > 0 ? generic_cost(co, t4, t) : 1e300; };
    auto report = optimizer::minimize_2d(f, {0.5 * pair.t4, 1.5 * pair.t});
    ASSERT_TRUE(report.converged) << i;
    EXPECT_LE(rel_diff(report.point[0], pair.t4), 1e-4) << i;
    EXPECT_LE(rel_diff(report.point[1], pair.t), 1e-4) << i;
  }
}

TEST(SolveClosedFormProperty, StationaryGradient) {
  std::mt19937_64 rng(22);
  for (int i = 0; i < 200; ++i) {
    const GenericCoefficients co = random_coefficients(rng);
    const DecisionPair pair = solve_closed_form(co);
    auto f = [&](double t4, double t) { return generic_cost(co, t4, t); };
    const double step = std::cbrt(std::numeric_limits<double>::epsilon());
    const auto g = optimizer::gradient_check(f, {pair.t4, pair.t}, {step * pair.t4, step * pair.t});
    EXPECT_LE(std::hypot(g[0], g[1]), 1e-6 * (std::abs(f(pair.t4, pair.t)) + 1)) << i;
  }
}

TEST(SolveClosedFormProperty, ScaleInvarianceAndRatioLaw) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> factor(0.01, 100);
  for (int i = 0; i < 200; ++i) {
    const GenericCoefficients co = random_coefficients(rng);
    const DecisionPair pair = solve_closed_form(co);
    EXPECT_LE(rel_diff(pair.t4 / pair.t, -co.b / (2 * co.c)), 1e-12) << i;
    GenericCoefficients scaled = co;
    const double k = factor(rng);
    scaled.a *= k;
    scaled.b *= k;
    scaled.c *= k;
    scaled.k *= k;
    const DecisionPair same = solve_closed_form(scaled);
    EXPECT_LE(rel_diff(same.t4, pair.t4), 1e-12) << i;
    EXPECT_LE(rel_diff(same.t, pair.t), 1e-12) << i;
  }
}

TEST(HessianCheck, ReferenceOptimum) {
  const GenericCoefficients co = coefficients_complete(reference_plant(), reference_costs());
  const DecisionPair pair = solve_closed_form(co);
  const HessianCheck h = hessian_check(co, pair.t4, pair.t);
  EXPECT_TRUE(h.positive_definite);
  EXPECT_LE(rel_diff(h.determinant, 4 * co.c * co.k / std::pow(pair.t, 4)), 1e-9);
  EXPECT_LE(rel_diff(h.determinant, 4 * 137731.25 * 300 / std::pow(0.28914, 4)), 1e-3);
}

TEST(HessianCheck, ZeroCurvatureIsNotPositiveDefinite) {
  GenericCoefficients co;
  co.k = 1;
  EXPECT_FALSE(hessian_check(co, 0.1, 0.2).positive_definite);
}

TEST(HessianCheckProperty, DeterminantIdentity) {
  std::mt19937_64 rng(24);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    GenericCoefficients co;
    co.c = std::pow(10.0, -2 + 6 * u(rng));
    co.k = std::pow(10.0, -2 + 6 * u(rng));
    const double t = std::pow(10.0, -2 + 3 * u(rng));
    const double t4 = t * 2 * (u(rng) - 0.25);
    const HessianCheck h = hessian_check(co, t4, t);
    EXPECT_TRUE(h.positive_definite) << i;
    EXPECT_GT(h.leading_minor, 0) << i;
    // The determinant is a difference of two products; its rounding error
    // scales with the products, not with the result.
    EXPECT_LE(std::abs(h.determinant - 4 * co.c * co.k / std::pow(t, 4)),
              1e-12 * h.matrix[0][0] * h.matrix[1][1])
        << i;
  }
}

TEST(ApproxCostPartial, MatchesGenericAtCompleteBacklog) {
  const ProductionParams plant = reference_plant();
  const CostParams costs = reference_costs();
  const GenericCoefficients co = coefficients_complete(plant, costs);
  EXPECT_NEAR(approx_cost_partial(0.19961, 0.28913, plant, costs), 6166, 1);
  int checked = 0;
  for (double t = 0.15; t <= 0.6; t += 0.05) {
    for (double share = 0.5; share < 0.95; share += 0.05) {
      const double t4 = share * t;
      double value = 0;
      try {
        value = approx_cost_partial(t4, t, plant, costs);
      } catch (const Error&) {
        continue;
      }
      ++checked;
      EXPECT_LE(rel_diff(value, generic_cost(co, t4, t)), 1e-9) << t4 << " " << t;
    }
  }
  EXPECT_GT(checked, 40);
}

TEST(ApproxCostPartial, MatchesGenericForRandomPlants) {
  std::mt19937_64 rng(25);
  for (int i = 0; i < 100; ++i) {
    const ProductionParams plant = testing::random_plant(rng);
    const CostParams costs = testing::random_costs(rng);
    const GenericCoefficients co = coefficients_complete(plant, costs);
    const double t = 0.3;
    for (double share : {0.6, 0.75, 0.9}) {
      double value = 0;
      try {
        value = approx_cost_partial(share * t, t, plant, costs);
      } catch (const Error&) {
        continue;
      }
      EXPECT_LE(rel_diff(value, generic_cost(co, share * t, t)), 1e-9) << i;
    }
  }
}

TEST(ApproxCostPartial, SetupOnly) {
  ProductionParams plant = reference_plant();
  plant.backlog_fraction = 0.6;
  EXPECT_NEAR(approx_cost_partial(0.2, 0.3, plant, testing::setup_only(300)), 1000, 1e-9);
}

TEST(SolveBasic, ReferenceSolution) {
  const Solution s = solve_basic(reference_plant(), reference_costs());
  EXPECT_EQ(s.case_label, CaseLabel::kBasicComplete);
  EXPECT_NEAR(s.optimum.t4, 0.1996, 5e-4);
  EXPECT_NEAR(s.optimum.t, 0.2891, 5e-4);
  EXPECT_NEAR(s.times.t1, 0.0031, 5e-4);
  EXPECT_NEAR(s.times.t2, 0.0519, 5e-4);
  EXPECT_NEAR(s.times.t3, 0.0247, 5e-4);
  EXPECT_NEAR(s.times.t5, 0.0098, 5e-4);
  EXPECT_NEAR(s.production_time, 0.0550, 5e-4);
  EXPECT_NEAR(*s.production_time_proportional, 0.0548, 5e-5);
  EXPECT_NEAR(s.quantity, 330, 2);
  EXPECT_LE(rel_diff(s.quantity, 6000 * s.production_time), 1e-12);
  EXPECT_NEAR(s.times.sum(), s.optimum.t, 1e-12);
  EXPECT_LT(s.optimum.t4, s.optimum.t);
  EXPECT_TRUE(s.warnings.empty());
}

TEST(SolveBasic, ForcedPartialPathAgrees) {
  SolveOptions options;
  options.force_partial = true;
  const Solution partial = solve_basic(reference_plant(), reference_costs(), options);
  const Solution complete = solve_basic(reference_plant(), reference_costs());
  EXPECT_EQ(partial.case_label, CaseLabel::kBasicPartial);
  EXPECT_LE(rel_diff(partial.optimum.t4, complete.optimum.t4), 1e-3);
  EXPECT_LE(rel_diff(partial.optimum.t, complete.optimum.t), 1e-3);
}

TEST(SolveBasic, DoublingSetupScalesCycleBySqrtTwo) {
  CostParams costs = reference_costs();
  const Solution base = solve_basic(reference_plant(), costs);
  costs.setup *= 2;
  const Solution doubled = solve_basic(reference_plant(), costs);
  EXPECT_LE(rel_diff(doubled.optimum.t / base.optimum.t, std::sqrt(2.0)), 1e-12);
}

TEST(SolveBasic, CostScalingLeavesPairUnchanged) {
  const Solution base = solve_basic(reference_plant(), reference_costs());
  const Solution scaled = solve_basic(reference_plant(), reference_costs().scaled(10));
  EXPECT_LE(rel_diff(scaled.optimum.t4, base.optimum.t4), 1e-10);
  EXPECT_LE(rel_diff(scaled.optimum.t, base.optimum.t), 1e-10);
}

TEST(SolveBasic, PartialBacklogInteriorOptimum) {
  ProductionParams plant = reference_plant();
  plant.backlog_fraction = 0.8;
  CostParams costs = reference_costs();
  costs.lost_sale = 5;
  const Solution s = solve_basic(plant, costs);
  EXPECT_EQ(s.case_label, CaseLabel::kBasicPartial);
  EXPECT_GT(s.times.t5, 0.0);
  EXPECT_NEAR(s.times.sum(), s.optimum.t, 1e-12);
  // Local optimality on a small ring around the reported pair.
  for (int k = 0; k < 8; ++k) {
    const double angle = k * M_PI / 4;
    const double t4 = s.optimum.t4 * (1 + 1e-3 * std::cos(angle));
    const double t = s.optimum.t * (1 + 1e-3 * std::sin(angle));
    EXPECT_GE(approx_cost_partial(t4, t, plant, costs), s.total_cost - 1e-9 * s.total_cost);
  }
  // Rate balance with lost sales: T1 = beta*lambda/(alpha p - beta' lambda) * (T1 + T5).
  EXPECT_NEAR(s.times.t1, 0.8 * 1000 / (4200 - 200) * (s.times.t1 + s.times.t5), 1e-12);
}

TEST(SolveBasic, PartialBacklogEdgeOptimum) {
  ProductionParams plant = reference_plant();
  plant.backlog_fraction = 0.8;
  CostParams costs = reference_costs();
  costs.lost_sale = 50;
  const Solution s = solve_basic(plant, costs);
  EXPECT_NEAR(s.times.t1 + s.times.t5, 0.0, 1e-6);
  EXPECT_GE(s.times.t1, 0.0);
  EXPECT_GE(s.times.t5, 0.0);
}

TEST(SolveBasic, LargeDecayWarns) {
  ProductionParams plant = reference_plant();
  plant.deterioration_rate = 3.0;
  plant.screening_fraction = 1.0;
  CostParams costs = reference_costs();
  costs.setup = 3000;
  const Solution s = solve_basic(plant, costs);
  ASSERT_GT(plant.decay() * s.optimum.t, 0.3);
  EXPECT_FALSE(s.warnings.empty());
}

TEST(SolveBasic, ValidatesInputs) {
  ProductionParams plant = reference_plant();
  plant.good_fraction = 0.1;
  EXPECT_THROW(solve_basic(plant, reference_costs()), ValidationError);
}

TEST(SolveBasic, SetupOnlyHasNoInteriorOptimum) {
  try {
    solve_basic(reference_plant(), testing::setup_only(300));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNoInteriorOptimum);
  }
}

}  // namespace
}  // namespace epq
