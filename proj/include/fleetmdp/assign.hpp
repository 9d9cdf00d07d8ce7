#pragma once

#include <functional>
#include <iosfwd>
#include <map>
#include <vector>

#include "fleetmdp/domain.hpp"

namespace fleetmdp {

/// Per-epoch assignment problem. One column per (attribute, decision) with
/// one equality resource row per attribute and one <= demand row per request
/// attribute; a column covers a demand row once per request it serves.
struct AssignmentProblem {
  struct Resource {
    VehicleAttribute attr;
    Count available = 0;
  };
  struct Demand {
    RequestAttribute req;
    Count available = 0;
  };
  struct Column {
    int resource = 0;
    Decision decision;
    double objective = 0.0;
    std::vector<std::pair<int, int>> covers;  // (demand row, multiplicity)
  };

  std::vector<Resource> resources;
  std::vector<Demand> demands;
  std::vector<Column> columns;
  double objective_constant = 0.0;
  bool has_multi = false;
};

struct AssignmentSolution {
  std::vector<Count> x;  // per column
  double objective = 0.0;  // includes objective_constant
  std::vector<double> resource_duals;
  std::vector<double> demand_duals;
  bool has_duals = false;
  bool degenerate = false;  // some basic variable sat at a bound
};

using ObjectiveFn =
    std::function<double(const VehicleAttribute&, const Decision&)>;
/// Value retained by one unserved copy of a request in the post-decision
/// state; folded into column coefficients plus a reported constant.
using DemandValueFn = std::function<double(const RequestAttribute&)>;

AssignmentProblem build_problem(
    const SystemState& s,
    const std::map<VehicleAttribute, std::vector<Decision>>& decisions,
    const ObjectiveFn& coeff, const DemandValueFn* demand_value = nullptr);

/// LP over the Multi-free surrogate region, solved with primal network
/// simplex on the equivalent bipartite min-cost flow. Vertex solutions are
/// integral; node potentials provide the duals.
AssignmentSolution solve_lp(const AssignmentProblem& prob);

/// Exact integer optimum: LP relaxation plus depth-first branch and bound on
/// a most-fractional column.
AssignmentSolution solve_ip(const AssignmentProblem& prob);

void write_lp_format(const AssignmentProblem& prob, std::ostream& os);

}  // namespace fleetmdp
