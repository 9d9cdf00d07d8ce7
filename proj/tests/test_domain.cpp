#include "fleetmdp/domain.hpp"

#include <random>

#include "doctest.h"
#include "fleetmdp/enumerate.hpp"
#include "generators.hpp"

using namespace fleetmdp;

namespace {
const Horizon kHz{720, 120};
}

TEST_CASE("recharge durations per fleet type") {
  FleetParams ice = FleetParams::ice();
  CHECK(ice.max_range == 93600);
  CHECK(recharge_duration(ice.max_range, ice) == 900);
  CHECK(recharge_duration(0, ice) == 960);  // one-minute fill plus the intercept

  FleetParams dcfc = FleetParams::dcfc();
  CHECK(dcfc.max_range == 63660);
  CHECK(recharge_duration(0, dcfc) == 3300);  // ~40 min charge plus the intercept

  FleetParams l2c = FleetParams::l2c();
  CHECK(l2c.max_range == 63660);
  // 20x the DCFC rate: (3300 - 900) * 20 + 900, within rounding.
  CHECK(recharge_duration(0, l2c) == 48889);

  CHECK_THROWS_AS(recharge_duration(-1, ice), InputError);
  CHECK_THROWS_AS(recharge_duration(ice.max_range + 1, ice), InputError);
}

TEST_CASE("idle parks one epoch") {
  Network g = build_grid(2, 2, 60);
  FleetParams f = FleetParams::ice();
  int t = 5;
  VehicleAttribute a{1, 1, 5000, 4, kHz.epoch_time(t)};
  VehicleAttribute out = transition_attribute(a, Decision::idle(), t, g, f, kHz);
  CHECK(out.loc == 1);
  CHECK(out.dest == 1);
  CHECK(out.range == 5000);
  CHECK(out.ready == kHz.epoch_time(t + 1));

  // Already busy past the next epoch: nothing changes, t catches up.
  VehicleAttribute busy{1, 1, 5000, 4, kHz.epoch_time(t + 3)};
  CHECK(transition_attribute(busy, Decision::idle(), t, g, f, kHz) == busy);
}

TEST_CASE("continue cases") {
  Network line(3, {{0, 1, 60}, {1, 0, 60}, {1, 2, 60}, {2, 1, 60}});
  FleetParams f = FleetParams::ice();
  const int t = 1;

  SUBCASE("still busy: attribute unchanged") {
    VehicleAttribute a{0, 2, 1000, 3, kHz.epoch_time(t + 1)};
    CHECK(transition_attribute(a, Decision::cont(), t, line, f, kHz) == a);
  }
  SUBCASE("arrives before the boundary: parks empty at the destination") {
    VehicleAttribute a{0, 2, 1000, 3, 120};
    VehicleAttribute out = transition_attribute(a, Decision::cont(), t, line, f, kHz);
    CHECK(out == VehicleAttribute{2, 2, 880, 4, 240});
  }
  SUBCASE("mid-path at the boundary: surfaces at the first later waypoint") {
    Network line4(4, {{0, 1, 100}, {1, 0, 100}, {1, 2, 100}, {2, 1, 100},
                      {2, 3, 100}, {3, 2, 100}});
    VehicleAttribute a{0, 3, 2000, 3, 120};
    VehicleAttribute out = transition_attribute(a, Decision::cont(), t, line4, f, kHz);
    // Waypoint arrivals at 220, 320, 420; the first at or past 240 is node 2.
    CHECK(out == VehicleAttribute{2, 3, 1800, 3, 320});
  }
  SUBCASE("last waypoint is the destination: drops off and turns empty") {
    VehicleAttribute a{0, 2, 1000, 3, 125};
    // Arrivals at 185 and 245; first at or past 240 is the destination.
    VehicleAttribute out = transition_attribute(a, Decision::cont(), t, line, f, kHz);
    CHECK(out == VehicleAttribute{2, 2, 880, 4, 245});
  }
}

TEST_CASE("single is a pickup shift composed with continue") {
  Network line(3, {{0, 1, 60}, {1, 0, 60}, {1, 2, 60}, {2, 1, 60}});
  FleetParams f = FleetParams::ice();
  VehicleAttribute a{0, 0, 10000, 4, 120};
  RequestAttribute b{1, 2, 1, 400, 86400, 1000};
  VehicleAttribute out =
      transition_attribute(a, Decision::single(b), 1, line, f, kHz);
  // Pickup at 180, dropoff at 240 which is exactly the boundary.
  CHECK(out == VehicleAttribute{2, 2, 10000 - 120, 4, 240});
}

TEST_CASE("queue drops off and then picks up") {
  Network line(3, {{0, 1, 60}, {1, 0, 60}, {1, 2, 60}, {2, 1, 60}});
  FleetParams f = FleetParams::ice();
  VehicleAttribute a{0, 1, 5000, 3, 120};
  RequestAttribute b{2, 0, 2, 400, 86400, 1500};
  VehicleAttribute out =
      transition_attribute(a, Decision::queue(b), 1, line, f, kHz);
  // Reaches the new origin at 120 + 60 + 60 = 240, exactly the boundary,
  // so the composed continue leaves it loaded and ready there.
  CHECK(out == VehicleAttribute{2, 0, 5000 - 120, 2, 240});
}

TEST_CASE("multi and pool commit the whole path") {
  Network line(3, {{0, 1, 60}, {1, 0, 60}, {1, 2, 60}, {2, 1, 60}});
  FleetParams f = FleetParams::ice();
  VehicleAttribute a{0, 0, 10000, 4, 150};
  RequestAttribute b1{0, 1, 1, 400, 86400, 700};
  RequestAttribute b2{1, 2, 1, 400, 86400, 800};
  PathPlan p = line.path_through({0, 0, 1, 2});
  Decision d = Decision::multi({b1, b2}, p, p.total_time - 120);
  VehicleAttribute out = transition_attribute(a, d, 1, line, f, kHz);
  CHECK(out == VehicleAttribute{2, 2, 10000 - 120, 4, 270});
}

TEST_CASE("relocate and recharge") {
  Network g = build_grid(2, 2, 60);
  FleetParams f = FleetParams::ice();
  VehicleAttribute a{0, 0, 46800, 4, 130};

  VehicleAttribute moved =
      transition_attribute(a, Decision::relocate(1), 1, g, f, kHz);
  CHECK(moved == VehicleAttribute{1, 1, 46800 - 60, 4, 240});

  VehicleAttribute charged =
      transition_attribute(a, Decision::recharge(), 1, g, f, kHz);
  // Refill of half the 26 h tank takes round(46800 * 2.308 / 3600) + 900 s.
  CHECK(charged.range == f.max_range);
  CHECK(charged.ready == 130 + 930);
  CHECK(charged.loc == 0);
  CHECK(charged.seats_free == 4);
}

TEST_CASE("contributions") {
  FleetParams f = FleetParams::ice();
  CostParams zero;
  RequestAttribute b{0, 1, 1, 400, 86400, 1000};
  RequestAttribute b2{1, 2, 1, 400, 86400, 800};
  VehicleAttribute a{0, 0, 1000, 4, 120};

  CHECK(contribution(a, Decision::single(b), zero, f) == doctest::Approx(10.0));
  CHECK(contribution(a, Decision::queue(b), zero, f) == doctest::Approx(10.0));
  CHECK(contribution(a, Decision::idle(), zero, f) == 0.0);
  CHECK(contribution(a, Decision::cont(), zero, f) == 0.0);
  CHECK(contribution(a, Decision::relocate(1), zero, f) == 0.0);
  CHECK(contribution(a, Decision::recharge(), zero, f) == 0.0);

  PathPlan p;
  p.waypoints = {0, 1, 2};
  p.leg_times = {60, 60};
  p.total_time = 120;
  CHECK(contribution(a, Decision::multi({b, b2}, p, 40), zero, f) ==
        doctest::Approx(18.0));

  CostParams priced;
  priced.detour_per_second = 0.01;
  priced.recharge_per_range_second = 0.001;
  CHECK(contribution(a, Decision::multi({b, b2}, p, 40), priced, f) ==
        doctest::Approx(18.0 - 0.4));
  CHECK(contribution(a, Decision::pool(b2, p, 25), priced, f) ==
        doctest::Approx(8.0 - 0.25));
  VehicleAttribute low{0, 0, 1000, 4, 120};
  CHECK(contribution(low, Decision::recharge(), priced, f) ==
        doctest::Approx(-0.001 * double(f.max_range - 1000)));
}

TEST_CASE("apply_decisions basics") {
  Network g = build_grid(2, 2, 60);
  FleetParams f = FleetParams::ice();
  SystemState s;
  s.epoch = 3;
  VehicleAttribute a{0, 0, 9000, 4, kHz.epoch_time(3)};
  VehicleAttribute a2{3, 3, 9000, 4, kHz.epoch_time(3)};
  s.vehicles[a] = 2;
  s.vehicles[a2] = 1;

  SUBCASE("all idle conserves the fleet and advances the epoch") {
    DecisionVector x{{a, Decision::idle(), 2}, {a2, Decision::idle(), 1}};
    SystemState nxt = apply_decisions(s, x, {}, g, f, kHz);
    CHECK(nxt.epoch == 4);
    CHECK(nxt.fleet_size() == 3);
    CHECK(nxt.requests.empty());
  }

  SUBCASE("serving consumes demand") {
    RequestAttribute b{1, 2, 1, kHz.epoch_time(9), 86400, 1200};
    s.requests[b] = 1;
    DecisionVector x{{a, Decision::single(b), 1},
                     {a, Decision::idle(), 1},
                     {a2, Decision::idle(), 1}};
    SystemState nxt = apply_decisions(s, x, {}, g, f, kHz);
    CHECK(nxt.requests.count(b) == 0);
    CHECK(nxt.fleet_size() == 3);
  }

  SUBCASE("requests past their response deadline drop out") {
    RequestAttribute stale{1, 2, 1, kHz.epoch_time(4) - 1, 86400, 1200};
    RequestAttribute fresh{1, 2, 1, kHz.epoch_time(4), 86400, 1200};
    s.requests[stale] = 1;
    s.requests[fresh] = 1;
    DecisionVector x{{a, Decision::idle(), 2}, {a2, Decision::idle(), 1}};
    SystemState nxt = apply_decisions(s, x, {}, g, f, kHz);
    CHECK(nxt.requests.count(stale) == 0);
    CHECK(nxt.requests.count(fresh) == 1);
  }

  SUBCASE("new demand merges in") {
    RequestAttribute b{1, 2, 1, kHz.epoch_time(9), 86400, 1200};
    DecisionVector x{{a, Decision::idle(), 2}, {a2, Decision::idle(), 1}};
    SystemState nxt = apply_decisions(s, x, {{b, 2}}, g, f, kHz);
    CHECK(nxt.requests.at(b) == 2);
  }

  SUBCASE("flow-balance violations are rejected") {
    DecisionVector missing{{a, Decision::idle(), 1}, {a2, Decision::idle(), 1}};
    CHECK_THROWS_AS(apply_decisions(s, missing, {}, g, f, kHz), InternalError);
    RequestAttribute b{1, 2, 1, kHz.epoch_time(9), 86400, 1200};
    DecisionVector phantom{{a, Decision::single(b), 1},
                           {a, Decision::idle(), 1},
                           {a2, Decision::idle(), 1}};
    CHECK_THROWS_AS(apply_decisions(s, phantom, {}, g, f, kHz), InternalError);
  }
}

TEST_CASE("randomized transition audit") {
  std::mt19937_64 rng(7771);
  FleetParams f = FleetParams::dcfc();
  int checked = 0;
  for (int it = 0; it < 60; ++it) {
    Network net = testgen::random_network(rng);
    SystemState s = testgen::random_state(rng, net, f, kHz);
    auto decisions = enumerate_decisions(s, net, f, kHz, {});
    DecisionVector all;
    for (const auto& [a, list] : decisions) {
      REQUIRE(!list.empty());
      for (const Decision& d : list) {
        VehicleAttribute out = transition_attribute(a, d, s.epoch, net, f, kHz);
        CHECK(out.range >= 0);
        CHECK(out.range <= f.max_range);
        CHECK(out.ready >= a.ready);
        CHECK((out.is_empty(f) || out.is_occupied(f)));
        if (d.kind == DecisionKind::Recharge) CHECK(out.range == f.max_range);
        ++checked;
      }
      all.emplace_back(a, list.back(), s.vehicles.at(a));  // never serves demand
    }
    SystemState nxt = apply_decisions(s, all, {}, net, f, kHz);
    CHECK(nxt.fleet_size() == s.fleet_size());
  }
  CHECK(checked > 500);
}

TEST_CASE("state json smoke") {
  SystemState s;
  s.epoch = 2;
  s.vehicles[{0, 0, 100, 4, 240}] = 1;
  s.requests[{0, 1, 1, 500, 86400, 250}] = 2;
  std::string j = s.to_json();
  CHECK(j.find("\"epoch\": 2") != std::string::npos);
  CHECK(j.find("\"fare_cents\": 250") != std::string::npos);
}
