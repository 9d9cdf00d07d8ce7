#pragma once

#include <map>
#include <optional>
#include <vector>

#include "fleetmdp/domain.hpp"

namespace fleetmdp {

struct EnumerationConfig {
  int max_trip_size = 2;
  std::optional<Seconds> max_wait;  // hard cap on decision-to-pickup time; off by default
  bool include_pooling = true;      // gates both Multi and Pool
};

/// A request set that some vehicle can serve, with one shortest feasible path
/// per reachable last-dropoff destination (the LDSPS).
struct TripCandidate {
  std::vector<RequestAttribute> requests;              // sorted, may repeat
  std::map<NodeId, PathPlan> paths_by_destination;     // minimal time per end node
};

/// Shortest feasible paths for vehicle `a` serving the whole set `B`, one per
/// possible last-dropoff destination; empty map when B is infeasible for a.
/// Label-setting search over pickup/dropoff orderings with time, range and
/// seat resources; legs are shortest paths between consecutive stops.
std::map<NodeId, PathPlan> feasible_trip_paths(
    const VehicleAttribute& a, const std::vector<RequestAttribute>& B, int t,
    const Network& net, const FleetParams& fleet, const Horizon& hz,
    const EnumerationConfig& cfg);

/// All request sets of size <= max_trip_size that `a` can serve, built
/// incrementally: a pair is only attempted when both singletons are feasible.
std::vector<TripCandidate> build_trips(const VehicleAttribute& a,
                                       const std::map<RequestAttribute, Count>& requests,
                                       int t, const Network& net,
                                       const FleetParams& fleet, const Horizon& hz,
                                       const EnumerationConfig& cfg);

/// The feasible decision set D(a) for every attribute present in the state.
/// Lists are sorted and never empty (Idle or Continue is always present).
std::map<VehicleAttribute, std::vector<Decision>> enumerate_decisions(
    const SystemState& s, const Network& net, const FleetParams& fleet,
    const Horizon& hz, const EnumerationConfig& cfg);

}  // namespace fleetmdp
