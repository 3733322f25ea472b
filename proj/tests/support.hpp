#ifndef EPQ_TESTS_SUPPORT_HPP
#define EPQ_TESTS_SUPPORT_HPP

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <random>

#include "epq/model.hpp"

namespace epq::testing {

// The reference instance used throughout the suite.
inline ProductionParams reference_plant() {
  ProductionParams plant;
  plant.production_rate = 6000;
  plant.good_fraction = 0.7;
  plant.demand_rate = 1000;
  plant.deterioration_rate = 0.1;
  plant.screening_fraction = 0.6;
  plant.rework_rate = 4000;
  plant.recovery_fraction = 0.6;
  plant.backlog_fraction = 1.0;
  return plant;
}

inline CostParams reference_costs() {
  CostParams costs;
  costs.setup = 300;
  costs.deterioration = 40;
  costs.deteriorated_sale = 100;
  costs.scrap = 30;
  costs.shortage = 200;
  costs.lost_sale = 0;
  costs.holding_serviceable = 5;
  costs.holding_imperfect = 4;
  return costs;
}

inline AggregatedParams reference_aggregated() {
  AggregatedParams agg;
  agg.plant = reference_plant();
  agg.costs = reference_costs();
  agg.plants = 5;
  agg.central_setup = 250;
  agg.leftover_sale = 10;
  agg.holding_central = 3;
  return agg;
}

inline CostParams setup_only(double setup) {
  CostParams costs;
  costs.setup = setup;
  return costs;
}

inline double rel_diff(double a, double b) {
  return std::abs(a - b) / std::max(std::abs(b), 1e-300);
}

// Random feasible plant: alpha*p and alpha_r*p_r both clear demand.
template <class Rng>
ProductionParams random_plant(Rng& rng, double backlog = 1.0) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  ProductionParams plant;
  plant.demand_rate = 500 + 1500 * u(rng);
  plant.good_fraction = 0.55 + 0.4 * u(rng);
  plant.production_rate = plant.demand_rate / plant.good_fraction * (1.5 + 3.0 * u(rng));
  plant.deterioration_rate = 0.01 + 0.2 * u(rng);
  plant.screening_fraction = 0.2 + 0.8 * u(rng);
  plant.recovery_fraction = 0.4 + 0.6 * u(rng);
  plant.rework_rate = plant.demand_rate / plant.recovery_fraction * (1.5 + 3.0 * u(rng));
  plant.backlog_fraction = backlog;
  return plant;
}

template <class Rng>
CostParams random_costs(Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  CostParams costs;
  costs.setup = 100 + 500 * u(rng);
  costs.deterioration = 10 + 50 * u(rng);
  costs.deteriorated_sale = 20 + 100 * u(rng);
  costs.scrap = 5 + 40 * u(rng);
  costs.shortage = 50 + 300 * u(rng);
  costs.lost_sale = 10 + 50 * u(rng);
  costs.holding_serviceable = 1 + 9 * u(rng);
  costs.holding_imperfect = 1 + 6 * u(rng);
  return costs;
}

inline std::filesystem::path data_path(const char* name) {
  return std::filesystem::path(EPQ_TEST_DATA_DIR) / name;
}

}  // namespace epq::testing

#endif  // EPQ_TESTS_SUPPORT_HPP
