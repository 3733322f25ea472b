#ifndef EPQ_MODEL_HPP
#define EPQ_MODEL_HPP

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "epq/error.hpp"

namespace epq {

/// Physical rates and fractions of one production/rework plant.
///
/// Fractions live in (0, 1]; rates are strictly positive. The lost-sales
/// fraction is derived from `backlog_fraction` and never stored.
struct ProductionParams {
  double production_rate = 0.0;     // units per unit time
  double good_fraction = 0.0;       // share of production that is serviceable
  double demand_rate = 0.0;         // units per unit time
  double deterioration_rate = 0.0;  // share of stock deteriorating per unit time
  double screening_fraction = 0.0;  // share of deteriorated stock screened out
  double rework_rate = 0.0;         // units per unit time
  double recovery_fraction = 0.0;   // share of reworked units recovered
  double backlog_fraction = 1.0;    // share of short customers willing to wait

  double lost_fraction() const { return 1.0 - backlog_fraction; }
  /// Effective stock decay rate; only screened deteriorated units leave stock.
  double decay() const { return screening_fraction * deterioration_rate; }
  double good_rate() const { return good_fraction * production_rate; }
  double net_production() const { return good_rate() - demand_rate; }
  double net_rework() const { return recovery_fraction * rework_rate - demand_rate; }
  double defect_rate() const { return (1.0 - good_fraction) * production_rate; }
  bool complete_backlog() const { return backlog_fraction == 1.0; }
};

/// Unit and setup costs. All values are nonnegative; the setup cost is positive.
struct CostParams {
  double setup = 0.0;                // per cycle
  double deterioration = 0.0;        // per screened-out deteriorated unit
  double deteriorated_sale = 0.0;    // per deteriorated unit reaching a customer
  double scrap = 0.0;                // per unrecoverable imperfect unit
  double shortage = 0.0;             // per backlogged unit per unit time
  double lost_sale = 0.0;            // per unit of demand lost
  double holding_serviceable = 0.0;  // per unit per unit time
  double holding_imperfect = 0.0;    // per unit per unit time

  CostParams scaled(double factor) const;
};

/// Weighted cost of one deteriorated unit: the screened share pays the
/// deterioration cost and the leaked share pays the customer penalty.
double deterioration_weight(const ProductionParams& plant, const CostParams& costs);

/// n identical local plants feeding one central rework plant.
struct AggregatedParams {
  ProductionParams plant;
  CostParams costs;
  int plants = 1;
  double central_setup = 0.0;    // per cycle at the central plant
  double leftover_sale = 0.0;    // penalty per recovered unit sold off at cycle end
  double holding_central = 0.0;  // per unit per unit time at the central plant
};

/// The decision variables: length of the depletion period and of the cycle.
struct DecisionPair {
  double t4 = 0.0;
  double t = 0.0;
};

struct CycleTimes {
  double t1 = 0.0;  // backlog make-up
  double t2 = 0.0;  // production with stock build-up
  double t3 = 0.0;  // rework
  double t4 = 0.0;  // depletion
  double t5 = 0.0;  // shortage accumulation
  std::optional<double> t6;  // central-plant depletion (aggregated only)
  double total = 0.0;

  double sum() const { return t1 + t2 + t3 + t4 + t5; }
};

struct InventoryLevels {
  double end_of_production = 0.0;  // serviceable stock when production stops
  double peak = 0.0;               // maximum serviceable stock
  double backlog = 0.0;            // depth of the backlog
  double imperfect_peak = 0.0;     // maximum stock of imperfect items
  std::optional<double> pooled_recovered;  // recovered stock at the central plant
};

/// Reduced objective TC = a*T + b*T4 + c*T4^2/T + k/T + d.
struct GenericCoefficients {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double d = 0.0;
  double k = 0.0;  // effective setup cost per cycle
  std::optional<double> eta;    // rework share of the cycle (complete backlog)
  std::optional<double> omega;  // slope of T2 in T3
};

enum class CaseLabel {
  kBasicComplete,
  kBasicPartial,
  kAggregatedCaseI,
  kAggregatedCaseII,
};

std::string_view to_string(CaseLabel label);

/// One of the two candidate pairs examined by the aggregated procedure.
struct CandidatePair {
  CaseLabel case_label = CaseLabel::kAggregatedCaseI;
  bool available = false;  // the case objective has an interior optimum
  DecisionPair unclamped;
  DecisionPair pair;
  bool clamped = false;
  double objective = 0.0;
};

struct Solution {
  DecisionPair optimum;
  CycleTimes times;
  InventoryLevels levels;
  double production_time = 0.0;
  // Production time from the cycle-proportional formula; single-plant only.
  std::optional<double> production_time_proportional;
  double quantity = 0.0;
  double total_cost = 0.0;
  CaseLabel case_label = CaseLabel::kBasicComplete;
  bool clamped = false;
  std::vector<CandidatePair> candidates;
  std::vector<std::string> warnings;
};

struct Violation {
  ErrorCode code;
  std::string field;
  std::string message;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<Violation> violations);

  const std::vector<Violation>& violations() const { return violations_; }

 private:
  std::vector<Violation> violations_;
};

std::vector<Violation> check(const ProductionParams& plant);
std::vector<Violation> check(const CostParams& costs);
std::vector<Violation> check(const AggregatedParams& agg);

struct BasicModel {
  ProductionParams plant;
  CostParams costs;
};

/// Returns the inputs unchanged, or throws ValidationError listing every
/// violated invariant.
BasicModel validate(const ProductionParams& plant, const CostParams& costs);
AggregatedParams validate(const AggregatedParams& agg);

}  // namespace epq

#endif  // EPQ_MODEL_HPP
