#include "fleetmdp/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <sstream>

namespace fleetmdp {

namespace {

SystemState make_initial(const Instance& inst, const FleetParams& fleet,
                         bool test, int path_idx) {
  SystemState s;
  s.epoch = 1;
  for (const InitialVehicle& v : inst.initial(test, path_idx)) {
    VehicleAttribute a;
    a.loc = v.loc;
    a.dest = v.loc;
    a.range = llround(v.range_frac * double(fleet.max_range));
    a.seats_free = fleet.capacity;
    a.ready = inst.horizon.epoch_time(1);
    s.vehicles[a] += 1;
  }
  return s;
}

}  // namespace

EpisodeResult run_episode(const Instance& inst, const PolicySpec& policy,
                          int path_idx, bool test_set, const PolicyContext& ctx,
                          const EpisodeOptions& opts) {
  if (policy.kind == PolicySpec::Kind::VFA && !policy.tables)
    throw InputError("VFA policy needs value tables");

  const SamplePath& path = inst.path(test_set, path_idx);
  const Horizon& hz = inst.horizon;

  std::map<int, std::map<RequestAttribute, Count>> demand;
  for (const TimedRequest& r : path.requests) {
    int e = hz.epoch_of(r.reveal);
    if (e >= 1 && e <= hz.epochs) demand[e][r.req] += 1;
  }

  EpisodeResult res;
  res.path_id = path_idx;
  res.fares_available = path.total_fares();
  res.revealed = Count(path.requests.size());

  SystemState s = make_initial(inst, ctx.fleet, test_set, path_idx);
  if (auto it = demand.find(1); it != demand.end()) s.requests = it->second;

  for (int t = 1; t <= hz.epochs; ++t) {
    DecisionVector x;
    switch (policy.kind) {
      case PolicySpec::Kind::Myopic:
        x = decide_myopic(s, ctx);
        break;
      case PolicySpec::Kind::PM:
        x = decide_pm(s, policy.theta, ctx);
        break;
      case PolicySpec::Kind::VFA:
        x = decide_vfa(s, *policy.tables, ctx);
        break;
    }

    EpochRow row;
    row.epoch = t;
    double epoch_reward = 0.0;
    for (const auto& [a, d, c] : x) {
      double contr = contribution(a, d, ctx.cost, ctx.fleet) * double(c);
      epoch_reward += contr;
      row.decision_counts[size_t(d.kind)] += c;
      res.decision_counts[size_t(d.kind)] += c;
      if (d.serves_requests()) res.served += Count(d.requests.size()) * c;
      if (opts.keep_log)
        res.log.push_back({t, a, d, c, contribution(a, d, ctx.cost, ctx.fleet)});
    }
    res.reward += epoch_reward;

    Count fleet_n = 0;
    double range_sum = 0.0;
    for (const auto& [a, c] : s.vehicles) {
      fleet_n += c;
      range_sum += double(a.range) * double(c);
      row.passengers_on_board += Count(ctx.fleet.capacity - a.seats_free) * c;
    }
    row.mean_range = fleet_n > 0 ? range_sum / double(fleet_n) : 0.0;
    for (const auto& [b, c] : s.requests) row.backlog += c;
    res.telemetry.push_back(row);

    if (!opts.dump_state_dir.empty()) {
      std::filesystem::create_directories(opts.dump_state_dir);
      char name[32];
      snprintf(name, sizeof name, "state_%04d.json", t);
      std::ofstream f(opts.dump_state_dir + "/" + name);
      f << s.to_json();
    }
    if (!opts.dump_lp_path.empty() && t == 1) {
      auto decisions = enumerate_decisions(s, *ctx.net, ctx.fleet, hz, ctx.enum_cfg);
      ObjectiveFn coeff = [&](const VehicleAttribute& a, const Decision& d) {
        return contribution(a, d, ctx.cost, ctx.fleet);
      };
      AssignmentProblem prob = build_problem(s, decisions, coeff);
      std::ofstream f(opts.dump_lp_path);
      write_lp_format(prob, f);
    }

    std::map<RequestAttribute, Count> incoming;
    if (auto it = demand.find(t + 1); it != demand.end()) incoming = it->second;
    s = apply_decisions(s, x, incoming, *ctx.net, ctx.fleet, hz);
  }

  // Unserved requests either expired along the way or sit in the final
  // backlog; both count as lost.
  res.lost = res.revealed - res.served;
  res.rfr = res.fares_available > 0.0 ? res.reward / res.fares_available : 1.0;
  return res;
}

EvalStats compute_stats(std::vector<double> values) {
  EvalStats st;
  const size_t n = values.size();
  if (n == 0) throw InputError("statistics of an empty sample");
  std::sort(values.begin(), values.end());
  double sum = 0.0;
  for (double v : values) sum += v;
  st.mean = sum / double(n);

  // Linear-interpolation quantiles on sorted data (position q*(n-1)).
  auto quantile = [&](double q) {
    double pos = q * double(n - 1);
    size_t lo = size_t(std::floor(pos));
    size_t hi = std::min(lo + 1, n - 1);
    double frac = pos - double(lo);
    return values[lo] + frac * (values[hi] - values[lo]);
  };
  st.median = quantile(0.5);
  st.iqr = quantile(0.75) - quantile(0.25);

  if (n > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - st.mean) * (v - st.mean);
    double sigma = std::sqrt(ss / double(n - 1));
    st.me = 1.96 * sigma / std::sqrt(double(n));
  }
  return st;
}

EvalResult evaluate(const Instance& inst, const PolicySpec& policy,
                    const PolicyContext& ctx, int jobs, bool keep_logs) {
  const int n = int(inst.test_paths.size());
  if (n < 1) throw InputError("instance has no test sample paths");
  jobs = std::max(1, jobs);

  EvalResult out;
  out.episodes.resize(n);
  std::atomic<int> next{0};
  auto worker = [&]() {
    for (;;) {
      int i = next.fetch_add(1);
      if (i >= n) return;
      EpisodeOptions opts;
      opts.keep_log = keep_logs;
      out.episodes[i] = run_episode(inst, policy, i, true, ctx, opts);
    }
  };
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::future<void>> fs;
    for (int w = 0; w < jobs; ++w) fs.push_back(std::async(std::launch::async, worker));
    for (auto& f : fs) f.get();
  }

  std::vector<double> rewards, rfrs;
  for (const auto& e : out.episodes) {
    rewards.push_back(e.reward);
    rfrs.push_back(e.rfr);
  }
  out.reward = compute_stats(rewards);
  out.rfr = compute_stats(rfrs);
  return out;
}

}  // namespace fleetmdp
