#pragma once

#include <random>

#include "fleetmdp/assign.hpp"
#include "fleetmdp/enumerate.hpp"
#include "fleetmdp/learn.hpp"

namespace fleetmdp {

struct PolicyContext {
  const Network* net = nullptr;
  FleetParams fleet;
  CostParams cost;
  Horizon horizon;
  EnumerationConfig enum_cfg;
};

/// Exact integer argmax of the immediate contribution.
DecisionVector decide_myopic(const SystemState& s, const PolicyContext& ctx);

/// Myopic with a recharge threshold: every actionable empty vehicle below
/// theta * max_range keeps only its Recharge column.
DecisionVector decide_pm(const SystemState& s, double theta, const PolicyContext& ctx);

/// Integer argmax of contribution plus the value of the post-decision
/// attribute, plus the demand retention term (folded into coefficients).
DecisionVector decide_vfa(const SystemState& s, const ValueTables& tables,
                          const PolicyContext& ctx);

struct SurrogateResult {
  DecisionVector decisions;
  std::map<VehicleAttribute, double> resource_duals;
  std::map<RequestAttribute, double> demand_duals;  // includes the retention term
  double lp_objective = 0.0;
};

/// The training surrogate: the Multi-free LP solved by network simplex, its
/// duals, and value-weighted randomized relocation destinations.
SurrogateResult decide_surrogate(const SystemState& s, const ValueTables& tables,
                                 std::mt19937_64& rng, const PolicyContext& ctx);

/// Throws when flow balance or demand limits are violated.
void verify_decision_vector(const SystemState& s, const DecisionVector& x);

}  // namespace fleetmdp
