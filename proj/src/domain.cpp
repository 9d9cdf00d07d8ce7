#include "fleetmdp/domain.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"

namespace fleetmdp {

std::string to_string(FleetType t) {
  switch (t) {
    case FleetType::ICE: return "ice";
    case FleetType::DCFC: return "dcfc";
    case FleetType::L2C: return "l2c";
  }
  throw InternalError("bad fleet type");
}

FleetType fleet_type_from_string(const std::string& s) {
  if (s == "ice") return FleetType::ICE;
  if (s == "dcfc") return FleetType::DCFC;
  if (s == "l2c") return FleetType::L2C;
  throw InputError("unknown fleet type: " + s + " (expected ice|dcfc|l2c)");
}

// 26 h tank filled in ~1 min; EV parameters converted to durations at the
// average taxi speed, 17 h 41 min of range, L2C charges 20x slower than DCFC.
FleetParams FleetParams::ice() {
  return {FleetType::ICE, 26 * 3600, 2.308 / 3600.0, 4};
}
FleetParams FleetParams::dcfc() {
  return {FleetType::DCFC, 17 * 3600 + 41 * 60, 2.262 * 60.0 / 3600.0, 4};
}
FleetParams FleetParams::l2c() {
  return {FleetType::L2C, 17 * 3600 + 41 * 60, 45.23 * 60.0 / 3600.0, 4};
}
FleetParams FleetParams::of(FleetType t) {
  switch (t) {
    case FleetType::ICE: return ice();
    case FleetType::DCFC: return dcfc();
    case FleetType::L2C: return l2c();
  }
  throw InternalError("bad fleet type");
}

Seconds recharge_duration(Seconds range, const FleetParams& fleet) {
  if (range < 0 || range > fleet.max_range)
    throw InputError("range out of [0, max_range]");
  return llround(double(fleet.max_range - range) * fleet.recharge_slope) + 900;
}

std::string to_string(DecisionKind k) {
  switch (k) {
    case DecisionKind::Single: return "single";
    case DecisionKind::Multi: return "multi";
    case DecisionKind::Pool: return "pool";
    case DecisionKind::Queue: return "queue";
    case DecisionKind::Relocate: return "relocate";
    case DecisionKind::Continue: return "continue";
    case DecisionKind::Idle: return "idle";
    case DecisionKind::Recharge: return "recharge";
  }
  throw InternalError("bad decision kind");
}

Decision Decision::single(RequestAttribute b) {
  Decision d;
  d.kind = DecisionKind::Single;
  d.requests = {b};
  return d;
}
Decision Decision::multi(std::vector<RequestAttribute> bs, PathPlan p, Seconds detour) {
  if (bs.size() < 2) throw InternalError("multi needs at least two requests");
  std::sort(bs.begin(), bs.end());
  Decision d;
  d.kind = DecisionKind::Multi;
  d.requests = std::move(bs);
  d.path = std::move(p);
  d.detour_seconds = detour;
  return d;
}
Decision Decision::pool(RequestAttribute b, PathPlan p, Seconds detour) {
  Decision d;
  d.kind = DecisionKind::Pool;
  d.requests = {b};
  d.path = std::move(p);
  d.detour_seconds = detour;
  return d;
}
Decision Decision::queue(RequestAttribute b) {
  Decision d;
  d.kind = DecisionKind::Queue;
  d.requests = {b};
  return d;
}
Decision Decision::relocate(NodeId v) {
  Decision d;
  d.kind = DecisionKind::Relocate;
  d.target = v;
  return d;
}
Decision Decision::cont() { return Decision{DecisionKind::Continue, {}, {}, -1}; }
Decision Decision::idle() { return Decision{DecisionKind::Idle, {}, {}, -1}; }
Decision Decision::recharge() { return Decision{DecisionKind::Recharge, {}, {}, -1}; }

Count SystemState::fleet_size() const {
  Count n = 0;
  for (const auto& [a, c] : vehicles) n += c;
  return n;
}

std::string SystemState::to_json() const {
  nlohmann::json j;
  j["epoch"] = epoch;
  auto vs = nlohmann::json::array();
  for (const auto& [a, c] : vehicles)
    vs.push_back({{"loc", a.loc}, {"dest", a.dest}, {"range", a.range},
                  {"seats_free", a.seats_free}, {"ready", a.ready}, {"count", c}});
  j["vehicles"] = vs;
  auto rs = nlohmann::json::array();
  for (const auto& [b, c] : requests)
    rs.push_back({{"origin", b.origin}, {"dest", b.dest}, {"heads", b.heads},
                  {"respond_by", b.respond_by}, {"pickup_by", b.pickup_by},
                  {"fare_cents", b.fare_cents}, {"count", c}});
  j["requests"] = rs;
  return j.dump(2);
}

namespace {

// Continue: drive from loc toward dest starting at `ready`. Arrivals at or
// before the next epoch boundary park the vehicle there (it turns empty);
// otherwise the vehicle surfaces at the first waypoint reached at or after
// the boundary. A vehicle that only reaches dest after the boundary has
// dropped its passengers by the time it is actionable, so it turns empty too.
VehicleAttribute continue_from(const VehicleAttribute& a, int t, const Network& net,
                               const FleetParams& fleet, const Horizon& hz) {
  if (a.ready >= hz.epoch_time(t + 1)) return a;
  const Seconds boundary = hz.next_boundary(a.ready);
  const Seconds drive = net.shortest_time(a.loc, a.dest);
  if (a.ready + drive <= boundary)
    return {a.dest, a.dest, a.range - drive, fleet.capacity, boundary};
  PathPlan p = net.shortest_path(a.loc, a.dest);
  Seconds at = a.ready;
  Seconds used = 0;
  for (size_t i = 1; i < p.waypoints.size(); ++i) {
    at += p.leg_times[i - 1];
    used += p.leg_times[i - 1];
    if (at >= boundary) {
      NodeId here = p.waypoints[i];
      if (here == a.dest)
        return {a.dest, a.dest, a.range - used, fleet.capacity, at};
      return {here, a.dest, a.range - used, a.seats_free, at};
    }
  }
  throw InternalError("continue: ran past destination");
}

VehicleAttribute checked(VehicleAttribute a) {
  if (a.range < 0) throw InternalError("transition produced negative range");
  return a;
}

}  // namespace

VehicleAttribute transition_attribute(const VehicleAttribute& a, const Decision& d,
                                      int t, const Network& net,
                                      const FleetParams& fleet, const Horizon& hz) {
  const Seconds next_epoch = hz.epoch_time(t + 1);
  auto m_a = [&](Seconds h) { return std::max(a.ready + h, hz.next_boundary(a.ready)); };

  switch (d.kind) {
    case DecisionKind::Continue:
      return checked(continue_from(a, t, net, fleet, hz));

    case DecisionKind::Single: {
      const RequestAttribute& b = d.requests.at(0);
      VehicleAttribute picked{b.origin, b.dest,
                              a.range - net.shortest_time(a.loc, b.origin),
                              fleet.capacity - b.heads,
                              a.ready + net.shortest_time(a.loc, b.origin)};
      return checked(continue_from(picked, t, net, fleet, hz));
    }

    case DecisionKind::Queue: {
      const RequestAttribute& b = d.requests.at(0);
      Seconds to_pickup = net.shortest_time(a.loc, a.dest) +
                          net.shortest_time(a.dest, b.origin);
      VehicleAttribute picked{b.origin, b.dest, a.range - to_pickup,
                              fleet.capacity - b.heads, a.ready + to_pickup};
      return checked(continue_from(picked, t, net, fleet, hz));
    }

    case DecisionKind::Multi:
    case DecisionKind::Pool:
      return checked({d.path.end(), d.path.end(), a.range - d.path.total_range(),
                      fleet.capacity, m_a(d.path.total_time)});

    case DecisionKind::Relocate: {
      Seconds use = net.shortest_time(a.loc, d.target);
      return checked({d.target, d.target, a.range - use, fleet.capacity, next_epoch});
    }

    case DecisionKind::Recharge:
      return {a.loc, a.loc, fleet.max_range, fleet.capacity,
              m_a(recharge_duration(a.range, fleet))};

    case DecisionKind::Idle:
      if (a.ready >= next_epoch) return a;
      return {a.loc, a.dest, a.range, fleet.capacity, hz.next_boundary(a.ready)};
  }
  throw InternalError("bad decision kind");
}

double contribution(const VehicleAttribute& a, const Decision& d,
                    const CostParams& cost, const FleetParams& fleet) {
  switch (d.kind) {
    case DecisionKind::Single:
    case DecisionKind::Queue:
      return d.requests.at(0).fare();
    case DecisionKind::Pool:
    case DecisionKind::Multi: {
      double fares = 0.0;
      for (const auto& b : d.requests) fares += b.fare();
      return fares - cost.detour_per_second * double(d.detour_seconds);
    }
    case DecisionKind::Recharge:
      return -cost.recharge_per_range_second * double(fleet.max_range - a.range);
    case DecisionKind::Relocate:
    case DecisionKind::Continue:
    case DecisionKind::Idle:
      return 0.0;
  }
  throw InternalError("bad decision kind");
}

SystemState apply_decisions(const SystemState& s, const DecisionVector& x,
                            const std::map<RequestAttribute, Count>& new_demand,
                            const Network& net, const FleetParams& fleet,
                            const Horizon& hz) {
  // Flow balance: every vehicle gets exactly one decision.
  std::map<VehicleAttribute, Count> used;
  std::map<RequestAttribute, Count> covered;
  for (const auto& [a, d, c] : x) {
    if (c < 0) throw InternalError("negative decision count");
    used[a] += c;
    for (const auto& b : d.requests) covered[b] += c;
  }
  for (const auto& [a, r] : s.vehicles) {
    auto it = used.find(a);
    if (it == used.end() || it->second != r)
      throw InternalError("flow balance violated for a vehicle attribute");
  }
  if (used.size() != s.vehicles.size())
    throw InternalError("decision vector names an unknown vehicle attribute");
  for (const auto& [b, c] : covered) {
    auto it = s.requests.find(b);
    if (it == s.requests.end() || c > it->second)
      throw InternalError("demand constraint violated for a request attribute");
  }

  SystemState out;
  out.epoch = s.epoch + 1;
  for (const auto& [a, d, c] : x) {
    if (c == 0) continue;
    out.vehicles[transition_attribute(a, d, s.epoch, net, fleet, hz)] += c;
  }

  const Seconds next_epoch = hz.epoch_time(s.epoch + 1);
  for (const auto& [b, avail] : s.requests) {
    Count left = avail;
    if (auto it = covered.find(b); it != covered.end()) left -= it->second;
    if (left > 0 && b.respond_by >= next_epoch && b.pickup_by >= next_epoch)
      out.requests[b] += left;
  }
  for (const auto& [b, c] : new_demand)
    if (c > 0) out.requests[b] += c;
  return out;
}

}  // namespace fleetmdp
