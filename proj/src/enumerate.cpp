#include "fleetmdp/enumerate.hpp"

#include <algorithm>
#include <limits>
#include <set>

namespace fleetmdp {

namespace {

struct Label {
  uint32_t mask = 0;            // done events; bit 2i = pickup i, 2i+1 = dropoff i
  NodeId node = 0;              // location of the last done event
  Seconds elapsed = 0;          // drive seconds since the vehicle's ready time
  std::vector<NodeId> stops;    // event locations in visit order
};

int onboard_after(uint32_t mask, const std::vector<RequestAttribute>& B) {
  int n = 0;
  for (size_t i = 0; i < B.size(); ++i) {
    bool picked = mask & (1u << (2 * i));
    bool dropped = mask & (1u << (2 * i + 1));
    if (picked && !dropped) n += B[i].heads;
  }
  return n;
}

}  // namespace

std::map<NodeId, PathPlan> feasible_trip_paths(
    const VehicleAttribute& a, const std::vector<RequestAttribute>& B, int t,
    const Network& net, const FleetParams& fleet, const Horizon& hz,
    const EnumerationConfig& cfg) {
  if (!a.is_empty(fleet)) throw InternalError("trip paths require an empty vehicle");
  if (B.empty() || int(B.size()) > 4)
    throw InputError("trip size must be between 1 and 4");

  const size_t k = B.size();
  const uint32_t full = (1u << (2 * k)) - 1;
  const Seconds now = hz.epoch_time(t);
  const Seconds latest_pickup_cap =
      cfg.max_wait ? now + *cfg.max_wait : std::numeric_limits<Seconds>::max();

  // Best label per (mask, node); expanded in nondecreasing elapsed order so
  // the first settled label per state is minimal.
  std::map<std::pair<uint32_t, NodeId>, Label> best;
  auto better = [](const Label& x, const Label& y) {
    if (x.elapsed != y.elapsed) return x.elapsed < y.elapsed;
    return x.stops < y.stops;
  };
  std::multimap<Seconds, Label> open;
  open.insert({0, Label{0, a.loc, 0, {}}});

  std::map<NodeId, PathPlan> result;
  std::map<NodeId, Label> done;

  while (!open.empty()) {
    Label cur = open.begin()->second;
    open.erase(open.begin());
    auto key = std::make_pair(cur.mask, cur.node);
    auto it = best.find(key);
    if (it != best.end() && better(it->second, cur)) continue;
    best[key] = cur;

    if (cur.mask == full) {
      auto dit = done.find(cur.node);
      if (dit == done.end() || better(cur, dit->second)) done[cur.node] = cur;
      continue;
    }

    for (size_t i = 0; i < k; ++i) {
      for (int ev = 0; ev < 2; ++ev) {
        uint32_t bit = 1u << (2 * i + ev);
        if (cur.mask & bit) continue;
        if (ev == 1 && !(cur.mask & (1u << (2 * i)))) continue;  // pickup first
        NodeId loc = ev == 0 ? B[i].origin : B[i].dest;
        Seconds elapsed = cur.elapsed + net.shortest_time(cur.node, loc);
        if (elapsed > a.range) continue;
        uint32_t mask = cur.mask | bit;
        if (ev == 0) {
          Seconds arrival = a.ready + elapsed;
          if (arrival > B[i].pickup_by || arrival > latest_pickup_cap) continue;
          if (onboard_after(mask, B) > fleet.capacity) continue;
        }
        Label nxt{mask, loc, elapsed, cur.stops};
        nxt.stops.push_back(loc);
        auto nkey = std::make_pair(mask, loc);
        auto nit = best.find(nkey);
        if (nit != best.end() && !better(nxt, nit->second)) continue;
        open.insert({elapsed, nxt});
      }
    }
  }

  for (auto& [node, lab] : done) {
    std::vector<NodeId> stops;
    stops.push_back(a.loc);
    for (NodeId s : lab.stops) stops.push_back(s);
    result[node] = net.path_through(stops);
  }
  return result;
}

std::vector<TripCandidate> build_trips(const VehicleAttribute& a,
                                       const std::map<RequestAttribute, Count>& requests,
                                       int t, const Network& net,
                                       const FleetParams& fleet, const Horizon& hz,
                                       const EnumerationConfig& cfg) {
  if (cfg.max_trip_size < 1) throw InputError("max_trip_size must be >= 1");
  std::vector<std::pair<RequestAttribute, Count>> pending;
  for (const auto& [b, c] : requests)
    if (c > 0) pending.emplace_back(b, c);

  std::vector<TripCandidate> out;

  // Size 1.
  std::vector<size_t> feasible_single;
  for (size_t i = 0; i < pending.size(); ++i) {
    auto paths = feasible_trip_paths(a, {pending[i].first}, t, net, fleet, hz, cfg);
    if (paths.empty()) continue;
    feasible_single.push_back(i);
    out.push_back({{pending[i].first}, std::move(paths)});
  }
  if (cfg.max_trip_size < 2) return out;

  // Larger sets, grown one request at a time; a set is attempted only when
  // every subset one smaller is feasible (the RTV pruning). Sets are index
  // multisets; a request attribute may appear as often as its count.
  std::set<std::vector<size_t>> feasible_prev;
  std::vector<std::vector<size_t>> prev;
  for (size_t i : feasible_single) {
    prev.push_back({i});
    feasible_prev.insert({i});
  }
  for (int size = 2; size <= cfg.max_trip_size; ++size) {
    std::set<std::vector<size_t>> feasible_cur;
    std::vector<std::vector<size_t>> cur;
    for (const auto& base : prev) {
      for (size_t j = base.back(); j < pending.size(); ++j) {
        std::vector<size_t> cand = base;
        cand.push_back(j);
        Count mult = Count(std::count(cand.begin(), cand.end(), j));
        if (mult > pending[j].second) continue;
        bool all_subsets = true;
        for (size_t drop = 0; drop + 1 < cand.size() && all_subsets; ++drop) {
          std::vector<size_t> sub;
          for (size_t q = 0; q < cand.size(); ++q)
            if (q != drop) sub.push_back(cand[q]);
          all_subsets = size == 2 || feasible_prev.count(sub) > 0;
        }
        if (!all_subsets) continue;
        if (feasible_cur.count(cand)) continue;
        std::vector<RequestAttribute> B;
        for (size_t q : cand) B.push_back(pending[q].first);
        auto paths = feasible_trip_paths(a, B, t, net, fleet, hz, cfg);
        if (paths.empty()) continue;
        feasible_cur.insert(cand);
        cur.push_back(cand);
        out.push_back({std::move(B), std::move(paths)});
      }
    }
    prev = std::move(cur);
    feasible_prev = std::move(feasible_cur);
    if (prev.empty()) break;
  }
  return out;
}

namespace {

Seconds direct_sum(const std::vector<RequestAttribute>& B, const Network& net) {
  Seconds s = 0;
  for (const auto& b : B) s += net.shortest_time(b.origin, b.dest);
  return s;
}

void pool_decisions(const VehicleAttribute& a, const RequestAttribute& b,
                    int t, const Network& net, const FleetParams& fleet,
                    const Horizon& hz, const EnumerationConfig& cfg,
                    std::vector<Decision>& out) {
  if (a.seats_free + b.heads > fleet.capacity) return;
  if (b.heads > a.seats_free) return;  // seats while existing passengers ride
  const Seconds now = hz.epoch_time(t);
  Seconds pickup_arrival = a.ready + net.shortest_time(a.loc, b.origin);
  if (pickup_arrival > b.pickup_by) return;
  if (cfg.max_wait && pickup_arrival > now + *cfg.max_wait) return;

  // New pickup before the existing dropoff; the two dropoffs order freely.
  std::map<NodeId, std::pair<Seconds, std::vector<NodeId>>> best;
  const std::vector<std::vector<NodeId>> orders = {
      {b.origin, a.dest, b.dest}, {b.origin, b.dest, a.dest}};
  for (const auto& stops : orders) {
    Seconds total = 0;
    NodeId at = a.loc;
    for (NodeId s : stops) {
      total += net.shortest_time(at, s);
      at = s;
    }
    if (total > a.range) continue;
    NodeId end = stops.back();
    auto it = best.find(end);
    if (it == best.end() || total < it->second.first ||
        (total == it->second.first && stops < it->second.second))
      best[end] = {total, stops};
  }
  for (auto& [end, ts] : best) {
    std::vector<NodeId> through{a.loc};
    for (NodeId s : ts.second) through.push_back(s);
    PathPlan p = net.path_through(through);
    Seconds detour = p.total_time - net.shortest_time(b.origin, b.dest);
    out.push_back(Decision::pool(b, std::move(p), detour));
  }
}

}  // namespace

std::map<VehicleAttribute, std::vector<Decision>> enumerate_decisions(
    const SystemState& s, const Network& net, const FleetParams& fleet,
    const Horizon& hz, const EnumerationConfig& cfg) {
  const int t = s.epoch;
  const Seconds now = hz.epoch_time(t);
  const Seconds next = hz.epoch_time(t + 1);

  std::map<VehicleAttribute, std::vector<Decision>> out;
  for (const auto& [a, count] : s.vehicles) {
    if (count <= 0) continue;
    std::vector<Decision>& ds = out[a];

    if (a.is_empty(fleet)) {
      EnumerationConfig trips_cfg = cfg;
      if (!cfg.include_pooling) trips_cfg.max_trip_size = 1;
      auto trips = build_trips(a, s.requests, t, net, fleet, hz, trips_cfg);
      for (auto& trip : trips) {
        if (trip.requests.size() == 1) {
          ds.push_back(Decision::single(trip.requests[0]));
        } else {
          Seconds direct = direct_sum(trip.requests, net);
          for (auto& [end, path] : trip.paths_by_destination)
            ds.push_back(Decision::multi(trip.requests, path,
                                         path.total_time - direct));
        }
      }

      if (a.ready < next) {
        std::set<NodeId> cands(net.out_neighbors(a.loc).begin(),
                               net.out_neighbors(a.loc).end());
        for (NodeId v = 0; v < net.node_count(); ++v)
          if (net.shortest_time(a.loc, v) <= hz.epoch_len) cands.insert(v);
        for (NodeId v : cands) {
          if (v == a.loc) continue;
          if (net.shortest_time(a.loc, v) > a.range) continue;
          ds.push_back(Decision::relocate(v));
        }
        if (a.range < fleet.max_range) ds.push_back(Decision::recharge());
      }
      ds.push_back(Decision::idle());
    } else if (a.is_occupied(fleet)) {
      ds.push_back(Decision::cont());
      for (const auto& [b, c] : s.requests) {
        if (c <= 0) continue;
        if (cfg.include_pooling) pool_decisions(a, b, t, net, fleet, hz, cfg, ds);
        // Queue: drop current passengers at dest, then head to the new origin.
        Seconds to_pickup = net.shortest_time(a.loc, a.dest) +
                            net.shortest_time(a.dest, b.origin);
        Seconds total = to_pickup + net.shortest_time(b.origin, b.dest);
        Seconds pickup_arrival = a.ready + to_pickup;
        if (total > a.range) continue;
        if (pickup_arrival > b.pickup_by) continue;
        if (cfg.max_wait && pickup_arrival > now + *cfg.max_wait) continue;
        ds.push_back(Decision::queue(b));
      }
    } else {
      throw InternalError("attribute is neither empty nor occupied");
    }
    std::sort(ds.begin(), ds.end());
  }
  return out;
}

}  // namespace fleetmdp
