#pragma once

#include <compare>
#include <map>
#include <string>
#include <vector>

#include "fleetmdp/network.hpp"
#include "fleetmdp/types.hpp"

namespace fleetmdp {

enum class FleetType { ICE, DCFC, L2C };

std::string to_string(FleetType t);
FleetType fleet_type_from_string(const std::string& s);

/// Vehicle energy model. Range is measured in seconds-of-driving and a drive
/// of duration s consumes s range. Refuel/recharge always fills to max_range
/// and takes (max_range - l) * recharge_slope + 900 seconds.
struct FleetParams {
  FleetType type = FleetType::ICE;
  Seconds max_range = 0;
  double recharge_slope = 0.0;  // seconds of charging per second of range
  int capacity = 4;

  static FleetParams ice();
  static FleetParams dcfc();
  static FleetParams l2c();
  static FleetParams of(FleetType t);
};

struct CostParams {
  double detour_per_second = 0.0;   // kappa >= 0, dollars per extra second
  double recharge_per_range_second = 0.0;  // dollars per second of range refilled
};

Seconds recharge_duration(Seconds range, const FleetParams& fleet);

/// Vehicle attribute vector: location, destination, range, free seats,
/// actionable time. Empty vehicles have seats_free == capacity and
/// loc == dest; occupied ones seats_free < capacity and loc != dest.
struct VehicleAttribute {
  NodeId loc = 0;
  NodeId dest = 0;
  Seconds range = 0;
  int seats_free = 0;
  Seconds ready = 0;

  bool is_empty(const FleetParams& f) const {
    return seats_free == f.capacity && loc == dest;
  }
  bool is_occupied(const FleetParams& f) const {
    return seats_free < f.capacity && loc != dest;
  }
  auto operator<=>(const VehicleAttribute&) const = default;
};

/// Request attribute vector. Times are absolute seconds since horizon start;
/// fares are kept in cents so equal requests merge exactly.
struct RequestAttribute {
  NodeId origin = 0;
  NodeId dest = 0;
  int heads = 1;
  Seconds respond_by = 0;
  Seconds pickup_by = 0;
  int64_t fare_cents = 0;

  double fare() const { return double(fare_cents) / 100.0; }
  auto operator<=>(const RequestAttribute&) const = default;
};

enum class DecisionKind : int {
  Single = 0,
  Multi = 1,
  Pool = 2,
  Queue = 3,
  Relocate = 4,
  Continue = 5,
  Idle = 6,
  Recharge = 7,
};

std::string to_string(DecisionKind k);

/// Tagged union over the eight decision families. `requests` holds the served
/// request(s) (two entries for Multi, sorted; duplicates allowed when two
/// identical requests are served together). `path` is the committed drive for
/// Multi and Pool. `target` is the relocation destination.
struct Decision {
  DecisionKind kind = DecisionKind::Idle;
  std::vector<RequestAttribute> requests;
  PathPlan path;
  NodeId target = -1;
  // For Multi/Pool: path time beyond the sum of the served requests' direct
  // origin->dest times. Filled in by the enumerator.
  Seconds detour_seconds = 0;

  static Decision single(RequestAttribute b);
  static Decision multi(std::vector<RequestAttribute> bs, PathPlan p, Seconds detour);
  static Decision pool(RequestAttribute b, PathPlan p, Seconds detour);
  static Decision queue(RequestAttribute b);
  static Decision relocate(NodeId v);
  static Decision cont();
  static Decision idle();
  static Decision recharge();

  bool serves_requests() const {
    return kind == DecisionKind::Single || kind == DecisionKind::Multi ||
           kind == DecisionKind::Pool || kind == DecisionKind::Queue;
  }
  auto operator<=>(const Decision&) const = default;
};

struct SystemState {
  int epoch = 1;
  std::map<VehicleAttribute, Count> vehicles;
  std::map<RequestAttribute, Count> requests;

  Count fleet_size() const;
  std::string to_json() const;
};

/// Joint decision: counts per (attribute, decision), kept sorted.
using DecisionVector = std::vector<std::tuple<VehicleAttribute, Decision, Count>>;

/// Attribute transition a^M(a, d) at decision epoch t.
VehicleAttribute transition_attribute(const VehicleAttribute& a, const Decision& d,
                                      int t, const Network& net,
                                      const FleetParams& fleet, const Horizon& hz);

/// Immediate contribution c_tad in dollars: fares for serving decisions, a
/// detour penalty for Multi/Pool, a recharge cost for Recharge, 0 otherwise.
double contribution(const VehicleAttribute& a, const Decision& d,
                    const CostParams& cost, const FleetParams& fleet);

/// State transition S^M: applies decisions, regroups vehicle counts, keeps
/// residual demand that is still answerable at t+1, then merges new demand.
SystemState apply_decisions(const SystemState& s, const DecisionVector& x,
                            const std::map<RequestAttribute, Count>& new_demand,
                            const Network& net, const FleetParams& fleet,
                            const Horizon& hz);

}  // namespace fleetmdp
