#include "fleetmdp/enumerate.hpp"

#include <random>

#include "doctest.h"
#include "generators.hpp"
#include "oracles.hpp"

using namespace fleetmdp;

namespace {
const Horizon kHz{720, 120};

std::map<NodeId, Seconds> times_of(const std::map<NodeId, PathPlan>& paths) {
  std::map<NodeId, Seconds> out;
  for (const auto& [node, p] : paths) out[node] = p.total_time;
  return out;
}
}  // namespace

TEST_CASE("singleton trip path is the direct concatenation") {
  Network line(3, {{0, 1, 60}, {1, 0, 60}, {1, 2, 60}, {2, 1, 60}});
  FleetParams f = FleetParams::ice();
  VehicleAttribute a{0, 0, 10000, 4, 120};
  RequestAttribute b{1, 2, 1, 400, 86400, 900};
  auto paths = feasible_trip_paths(a, {b}, 1, line, f, kHz, {});
  REQUIRE(paths.size() == 1);
  CHECK(paths.at(2).total_time == 120);
  CHECK(paths.at(2).waypoints == std::vector<NodeId>{0, 1, 2});
}

TEST_CASE("pair on a 5-node line returns both last-dropoff paths") {
  Network line(5, {{0, 1, 60}, {1, 0, 60}, {1, 2, 60}, {2, 1, 60},
                   {2, 3, 60}, {3, 2, 60}, {3, 4, 60}, {4, 3, 60}});
  FleetParams f = FleetParams::ice();
  VehicleAttribute a{0, 0, 100000, 4, 120};
  RequestAttribute b1{1, 3, 1, 400, 86400, 900};
  RequestAttribute b2{2, 4, 1, 400, 86400, 900};
  auto paths = feasible_trip_paths(a, {b1, b2}, 1, line, f, kHz, {});
  auto ref = oracle::brute_force_trip(a, {b1, b2}, 1, line, f, kHz, {});
  CHECK(times_of(paths) == ref.best_time);
  REQUIRE(paths.count(3) == 1);
  REQUIRE(paths.count(4) == 1);
}

TEST_CASE("a tight pickup deadline forces the other pickup first") {
  Network line(5, {{0, 1, 60}, {1, 0, 60}, {1, 2, 60}, {2, 1, 60},
                   {2, 3, 60}, {3, 2, 60}, {3, 4, 60}, {4, 3, 60}});
  FleetParams f = FleetParams::ice();
  VehicleAttribute a{0, 0, 100000, 4, 120};
  // b2 must be reached by 240, so any feasible ordering picks it up first.
  RequestAttribute b1{1, 3, 1, 400, 86400, 900};
  RequestAttribute b2{2, 4, 1, 400, 240, 900};
  auto ref = oracle::brute_force_trip(a, {b1, b2}, 1, line, f, kHz, {});
  auto paths = feasible_trip_paths(a, {b1, b2}, 1, line, f, kHz, {});
  CHECK(times_of(paths) == ref.best_time);
}

TEST_CASE("build_trips applies the incremental pruning without losing trips") {
  std::mt19937_64 rng(515253);
  FleetParams f = FleetParams::dcfc();
  for (int it = 0; it < 120; ++it) {
    Network net = testgen::random_network(rng);
    SystemState s = testgen::random_state(rng, net, f, kHz, 1, 4, false);
    auto a = s.vehicles.begin()->first;
    EnumerationConfig cfg;
    auto trips = build_trips(a, s.requests, s.epoch, net, f, kHz, cfg);

    // Reference: unpruned enumeration of singleton and pair multisets.
    std::vector<RequestAttribute> pending;
    for (auto& [b, c] : s.requests)
      for (Count i = 0; i < c; ++i) pending.push_back(b);
    std::map<std::vector<RequestAttribute>, std::map<NodeId, Seconds>> ref;
    for (size_t i = 0; i < pending.size(); ++i) {
      auto r1 = oracle::brute_force_trip(a, {pending[i]}, s.epoch, net, f, kHz, cfg);
      if (!r1.best_time.empty()) ref[{pending[i]}] = r1.best_time;
      for (size_t j = i + 1; j < pending.size(); ++j) {
        std::vector<RequestAttribute> B{pending[i], pending[j]};
        std::sort(B.begin(), B.end());
        auto r2 = oracle::brute_force_trip(a, B, s.epoch, net, f, kHz, cfg);
        if (!r2.best_time.empty()) ref[B] = r2.best_time;
      }
    }
    std::map<std::vector<RequestAttribute>, std::map<NodeId, Seconds>> got;
    for (const auto& trip : trips) got[trip.requests] = times_of(trip.paths_by_destination);
    CHECK(got == ref);
  }
}

TEST_CASE("oracle equivalence on randomized trips") {
  std::mt19937_64 rng(99120);
  FleetParams f = FleetParams::dcfc();
  for (int it = 0; it < 150; ++it) {
    Network net = testgen::random_network(rng);
    int epoch = int(uniform_int(rng, 1, 30));
    VehicleAttribute a = testgen::random_vehicle(rng, net, f, kHz, epoch, false);
    std::vector<RequestAttribute> B;
    int k = int(uniform_int(rng, 1, 2));
    for (int i = 0; i < k; ++i) {
      RequestAttribute b = testgen::random_request(rng, net, f, kHz, epoch);
      // Give pickup deadlines a real chance to bind.
      if (uniform01(rng) < 0.5)
        b.pickup_by = kHz.epoch_time(epoch) + uniform_int(rng, 0, 10 * kHz.epoch_len);
      B.push_back(b);
    }
    std::sort(B.begin(), B.end());
    EnumerationConfig cfg;
    if (uniform01(rng) < 0.3) cfg.max_wait = uniform_int(rng, 60, 20 * kHz.epoch_len);
    auto got = times_of(feasible_trip_paths(a, B, epoch, net, f, kHz, cfg));
    auto ref = oracle::brute_force_trip(a, B, epoch, net, f, kHz, cfg).best_time;
    CHECK(got == ref);
  }
}

TEST_CASE("tightening max_wait never enlarges a decision set") {
  std::mt19937_64 rng(42424);
  FleetParams f = FleetParams::dcfc();
  for (int it = 0; it < 40; ++it) {
    Network net = testgen::random_network(rng);
    SystemState s = testgen::random_state(rng, net, f, kHz);
    EnumerationConfig loose, tight;
    loose.max_wait = 40 * kHz.epoch_len;
    tight.max_wait = 10 * kHz.epoch_len;
    auto wide = enumerate_decisions(s, net, f, kHz, loose);
    auto narrow = enumerate_decisions(s, net, f, kHz, tight);
    // A tighter window may pick a different minimal path for a Multi/Pool
    // slot, so compare decision slots: kind, served requests, end node.
    auto slot = [](const Decision& d) {
      NodeId end = d.path.waypoints.empty() ? d.target : d.path.end();
      return std::make_tuple(d.kind, d.requests, end);
    };
    for (const auto& [a, ds] : narrow) {
      const auto& w = wide.at(a);
      for (const Decision& d : ds)
        CHECK(std::any_of(w.begin(), w.end(), [&](const Decision& e) {
          return slot(e) == slot(d);
        }));
    }
  }
}

TEST_CASE("decision families for an empty vehicle with a full tank") {
  Network g = build_grid(3, 3, 60);
  FleetParams f = FleetParams::ice();
  SystemState s;
  s.epoch = 2;
  VehicleAttribute a{4, 4, f.max_range, 4, kHz.epoch_time(2)};  // center node
  s.vehicles[a] = 1;
  auto ds = enumerate_decisions(s, g, f, kHz, {}).at(a);

  bool has_idle = false, has_recharge = false;
  int relocates = 0;
  for (const Decision& d : ds) {
    if (d.kind == DecisionKind::Idle) has_idle = true;
    if (d.kind == DecisionKind::Recharge) has_recharge = true;
    if (d.kind == DecisionKind::Relocate) ++relocates;
  }
  CHECK(has_idle);
  CHECK_FALSE(has_recharge);  // tank is full
  // Four adjacent nodes at 60 s plus the four diagonal nodes at 120 s.
  CHECK(relocates == 8);
}

TEST_CASE("occupied vehicle with no pending requests only continues") {
  Network g = build_grid(3, 3, 60);
  FleetParams f = FleetParams::ice();
  SystemState s;
  s.epoch = 2;
  VehicleAttribute a{0, 8, 4000, 3, kHz.epoch_time(4)};  // busy past t+1
  s.vehicles[a] = 1;
  auto ds = enumerate_decisions(s, g, f, kHz, {}).at(a);
  REQUIRE(ds.size() == 1);
  CHECK(ds[0].kind == DecisionKind::Continue);
}

TEST_CASE("range excludes an unreachable single") {
  Network line(3, {{0, 1, 60}, {1, 0, 60}, {1, 2, 60}, {2, 1, 60}});
  FleetParams f = FleetParams::ice();
  SystemState s;
  s.epoch = 1;
  VehicleAttribute a{0, 0, 60, 4, 120};  // one hop of range
  s.vehicles[a] = 1;
  RequestAttribute far{2, 0, 1, 600, 86400, 2000};  // origin two hops away
  s.requests[far] = 1;
  auto ds = enumerate_decisions(s, line, f, kHz, {}).at(a);
  for (const Decision& d : ds) CHECK(d.kind != DecisionKind::Single);
}

TEST_CASE("capacity can rule out a pair whose singletons are fine") {
  Network g = build_grid(2, 2, 60);
  FleetParams f = FleetParams::ice();
  VehicleAttribute a{0, 0, 90000, 4, 120};
  // Both pickups at node 1 must happen by 240; riding together needs six
  // seats, serving one after the other misses the second deadline.
  RequestAttribute b1{1, 2, 3, 400, 240, 900};
  RequestAttribute b2{1, 2, 3, 500, 240, 901};
  std::map<RequestAttribute, Count> reqs{{b1, 1}, {b2, 1}};
  auto trips = build_trips(a, reqs, 1, g, f, kHz, {});
  CHECK(trips.size() == 2);
  for (const auto& trip : trips) CHECK(trip.requests.size() == 1);
}

TEST_CASE("identical-origin pair keeps paths for both dropoffs") {
  Network line(4, {{0, 1, 60}, {1, 0, 60}, {1, 2, 60}, {2, 1, 60},
                   {2, 3, 60}, {3, 2, 60}});
  FleetParams f = FleetParams::ice();
  VehicleAttribute a{0, 0, 90000, 4, 120};
  RequestAttribute b1{1, 2, 1, 400, 86400, 900};
  RequestAttribute b2{1, 3, 1, 500, 86400, 901};
  std::map<RequestAttribute, Count> reqs{{b1, 1}, {b2, 1}};
  auto trips = build_trips(a, reqs, 1, line, f, kHz, {});
  REQUIRE(trips.size() == 3);
  const TripCandidate* pair = nullptr;
  for (const auto& t : trips)
    if (t.requests.size() == 2) pair = &t;
  REQUIRE(pair != nullptr);
  CHECK(pair->paths_by_destination.count(2) == 1);
  CHECK(pair->paths_by_destination.count(3) == 1);
  auto ref = oracle::brute_force_trip(a, {b1, b2}, 1, line, f, kHz, {});
  CHECK(times_of(pair->paths_by_destination) == ref.best_time);
}

TEST_CASE("two copies of one request can share a multi trip") {
  Network line(3, {{0, 1, 60}, {1, 0, 60}, {1, 2, 60}, {2, 1, 60}});
  FleetParams f = FleetParams::ice();
  VehicleAttribute a{0, 0, 90000, 4, 120};
  RequestAttribute b{1, 2, 1, 400, 86400, 900};
  std::map<RequestAttribute, Count> reqs{{b, 2}};
  auto trips = build_trips(a, reqs, 1, line, f, kHz, {});
  REQUIRE(trips.size() == 2);
  CHECK(trips[0].requests.size() == 1);
  CHECK(trips[1].requests == std::vector<RequestAttribute>{b, b});
  // One copy pending: no pair.
  reqs[b] = 1;
  CHECK(build_trips(a, reqs, 1, line, f, kHz, {}).size() == 1);
}

TEST_CASE("pool honors the seat gate and the pickup-before-dropoff order") {
  Network line(4, {{0, 1, 60}, {1, 0, 60}, {1, 2, 60}, {2, 1, 60},
                   {2, 3, 60}, {3, 2, 60}});
  FleetParams f = FleetParams::ice();
  SystemState s;
  s.epoch = 1;
  VehicleAttribute a{0, 2, 90000, 2, 120};  // two riders aboard, two seats free
  s.vehicles[a] = 1;
  RequestAttribute b{1, 3, 2, 400, 86400, 900};
  s.requests[b] = 1;
  auto ds = enumerate_decisions(s, line, f, kHz, {}).at(a);

  std::vector<const Decision*> pools;
  for (const Decision& d : ds)
    if (d.kind == DecisionKind::Pool) pools.push_back(&d);
  REQUIRE(pools.size() == 2);  // one per last-dropoff node
  for (const Decision* d : pools) {
    // New pickup comes before the existing dropoff at node 2.
    auto& w = d->path.waypoints;
    auto pick = std::find(w.begin(), w.end(), NodeId(1));
    auto drop = std::find(w.begin(), w.end(), NodeId(2));
    CHECK(pick < drop);
  }

  // Three heads break the seat gate (2 free + 3 > 4 capacity).
  SystemState s2 = s;
  s2.requests.clear();
  RequestAttribute big{1, 3, 3, 400, 86400, 900};
  s2.requests[big] = 1;
  for (const Decision& d : enumerate_decisions(s2, line, f, kHz, {}).at(a))
    CHECK(d.kind != DecisionKind::Pool);
}

TEST_CASE("queue requires reachability after the dropoff") {
  Network line(3, {{0, 1, 60}, {1, 0, 60}, {1, 2, 60}, {2, 1, 60}});
  FleetParams f = FleetParams::ice();
  SystemState s;
  s.epoch = 1;
  VehicleAttribute a{0, 1, 180, 1, 120};
  s.vehicles[a] = 1;
  RequestAttribute b{2, 0, 1, 400, 86400, 900};
  s.requests[b] = 1;
  // Needs 60 (finish leg) + 60 (to new origin) + 120 (trip) = 240 > 180 range.
  auto ds = enumerate_decisions(s, line, f, kHz, {}).at(a);
  for (const Decision& d : ds) CHECK(d.kind != DecisionKind::Queue);

  SystemState s2 = s;
  s2.vehicles.clear();
  VehicleAttribute a2{0, 1, 240, 1, 120};
  s2.vehicles[a2] = 1;
  bool has_queue = false;
  for (const Decision& d : enumerate_decisions(s2, line, f, kHz, {}).at(a2))
    has_queue |= d.kind == DecisionKind::Queue;
  CHECK(has_queue);
}

TEST_CASE("pooling flag removes Multi and Pool everywhere") {
  std::mt19937_64 rng(31337);
  FleetParams f = FleetParams::dcfc();
  for (int it = 0; it < 25; ++it) {
    Network net = testgen::random_network(rng);
    SystemState s = testgen::random_state(rng, net, f, kHz);
    EnumerationConfig off;
    off.include_pooling = false;
    for (const auto& [a, ds] : enumerate_decisions(s, net, f, kHz, off))
      for (const Decision& d : ds) {
        CHECK(d.kind != DecisionKind::Multi);
        CHECK(d.kind != DecisionKind::Pool);
      }
  }
}
