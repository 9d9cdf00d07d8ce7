#include "fleetmdp/policy.hpp"

#include <algorithm>

namespace fleetmdp {

namespace {

DecisionVector extract(const AssignmentProblem& prob, const std::vector<Count>& x) {
  DecisionVector out;
  for (size_t j = 0; j < prob.columns.size(); ++j)
    if (x[j] > 0)
      out.emplace_back(prob.resources[prob.columns[j].resource].attr,
                       prob.columns[j].decision, x[j]);
  return out;
}

DecisionVector solve_policy_ip(const SystemState& s, const PolicyContext& ctx,
                               const ObjectiveFn& coeff,
                               const DemandValueFn* demand_value,
                               const std::function<void(std::map<VehicleAttribute,
                                                                 std::vector<Decision>>&)>&
                                   filter = nullptr) {
  auto decisions = enumerate_decisions(s, *ctx.net, ctx.fleet, ctx.horizon, ctx.enum_cfg);
  if (filter) filter(decisions);
  AssignmentProblem prob = build_problem(s, decisions, coeff, demand_value);
  AssignmentSolution sol = solve_ip(prob);
  DecisionVector out = extract(prob, sol.x);
  verify_decision_vector(s, out);
  return out;
}

}  // namespace

void verify_decision_vector(const SystemState& s, const DecisionVector& x) {
  std::map<VehicleAttribute, Count> used;
  std::map<RequestAttribute, Count> covered;
  for (const auto& [a, d, c] : x) {
    if (c < 0) throw InternalError("policy produced a negative count");
    used[a] += c;
    for (const auto& b : d.requests) covered[b] += c;
  }
  for (const auto& [a, r] : s.vehicles) {
    if (r <= 0) continue;
    auto it = used.find(a);
    if (it == used.end() || it->second != r)
      throw InternalError("policy output violates flow balance");
  }
  for (const auto& [b, c] : covered) {
    auto it = s.requests.find(b);
    if (it == s.requests.end() || c > it->second)
      throw InternalError("policy output violates a demand constraint");
  }
}

DecisionVector decide_myopic(const SystemState& s, const PolicyContext& ctx) {
  ObjectiveFn coeff = [&](const VehicleAttribute& a, const Decision& d) {
    return contribution(a, d, ctx.cost, ctx.fleet);
  };
  return solve_policy_ip(s, ctx, coeff, nullptr);
}

DecisionVector decide_pm(const SystemState& s, double theta, const PolicyContext& ctx) {
  if (!(theta > 0.0 && theta <= 1.0)) throw InputError("theta must be in (0, 1]");
  ObjectiveFn coeff = [&](const VehicleAttribute& a, const Decision& d) {
    return contribution(a, d, ctx.cost, ctx.fleet);
  };
  const Seconds next = ctx.horizon.epoch_time(s.epoch + 1);
  auto filter = [&](std::map<VehicleAttribute, std::vector<Decision>>& ds) {
    for (auto& [a, list] : ds) {
      if (!a.is_empty(ctx.fleet)) continue;
      if (a.ready >= next) continue;
      if (double(a.range) >= theta * double(ctx.fleet.max_range)) continue;
      std::vector<Decision> only;
      for (const Decision& d : list)
        if (d.kind == DecisionKind::Recharge) only.push_back(d);
      if (only.empty())
        throw InternalError("forced-recharge attribute lacks a Recharge decision");
      list = std::move(only);
    }
  };
  return solve_policy_ip(s, ctx, coeff, nullptr, filter);
}

namespace {

ObjectiveFn vfa_coeff(const SystemState& s, const ValueTables& tables,
                      const PolicyContext& ctx) {
  return [&s, &tables, &ctx](const VehicleAttribute& a, const Decision& d) {
    VehicleAttribute post =
        transition_attribute(a, d, s.epoch, *ctx.net, ctx.fleet, ctx.horizon);
    return contribution(a, d, ctx.cost, ctx.fleet) + tables.value(post);
  };
}

DemandValueFn vfa_demand_value(const SystemState& s, const ValueTables& tables,
                               const PolicyContext& ctx) {
  return [&s, &tables, &ctx](const RequestAttribute& b) {
    return tables.demand_value(b, s.epoch, ctx.horizon);
  };
}

}  // namespace

DecisionVector decide_vfa(const SystemState& s, const ValueTables& tables,
                          const PolicyContext& ctx) {
  ObjectiveFn coeff = vfa_coeff(s, tables, ctx);
  DemandValueFn dv = vfa_demand_value(s, tables, ctx);
  return solve_policy_ip(s, ctx, coeff, &dv);
}

SurrogateResult decide_surrogate(const SystemState& s, const ValueTables& tables,
                                 std::mt19937_64& rng, const PolicyContext& ctx) {
  PolicyContext sctx = ctx;
  sctx.enum_cfg.max_trip_size = 1;  // Multi-free surrogate region

  auto decisions =
      enumerate_decisions(s, *sctx.net, sctx.fleet, sctx.horizon, sctx.enum_cfg);
  ObjectiveFn coeff = vfa_coeff(s, tables, sctx);
  DemandValueFn dv = vfa_demand_value(s, tables, sctx);
  AssignmentProblem prob = build_problem(s, decisions, coeff, &dv);
  AssignmentSolution sol = solve_lp(prob);

  // Redraw relocation destinations with probability proportional to the
  // post-decision value, floored so no destination is ever locked out.
  constexpr double kFloor = 1e-6;
  std::vector<Count> x = sol.x;
  for (size_t r = 0; r < prob.resources.size(); ++r) {
    Count reloc = 0;
    std::vector<size_t> cols;
    for (size_t j = 0; j < prob.columns.size(); ++j) {
      if (prob.columns[j].resource != int(r)) continue;
      if (prob.columns[j].decision.kind != DecisionKind::Relocate) continue;
      cols.push_back(j);
      reloc += x[j];
    }
    if (reloc == 0) continue;
    const VehicleAttribute& a = prob.resources[r].attr;
    std::vector<double> cum;
    double total = 0.0;
    for (size_t j : cols) {
      VehicleAttribute post = transition_attribute(
          a, prob.columns[j].decision, s.epoch, *sctx.net, sctx.fleet, sctx.horizon);
      total += std::max(tables.value(post), kFloor);
      cum.push_back(total);
    }
    for (size_t j : cols) x[j] = 0;
    for (Count k = 0; k < reloc; ++k) {
      double u = uniform01(rng) * total;
      size_t pick = size_t(std::lower_bound(cum.begin(), cum.end(), u) - cum.begin());
      if (pick >= cols.size()) pick = cols.size() - 1;
      x[cols[pick]] += 1;
    }
  }

  SurrogateResult out;
  out.decisions = extract(prob, x);
  verify_decision_vector(s, out.decisions);
  out.lp_objective = sol.objective;
  for (size_t r = 0; r < prob.resources.size(); ++r)
    out.resource_duals[prob.resources[r].attr] = sol.resource_duals[r];
  for (size_t d = 0; d < prob.demands.size(); ++d) {
    // Unfold: the retained value was subtracted from serving columns, so the
    // true demand-row dual is the folded dual plus the retention term.
    double retain = tables.demand_value(prob.demands[d].req, s.epoch, ctx.horizon);
    out.demand_duals[prob.demands[d].req] = sol.demand_duals[d] + retain;
  }
  return out;
}

}  // namespace fleetmdp
