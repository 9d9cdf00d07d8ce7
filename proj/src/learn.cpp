#include "fleetmdp/learn.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "fleetmdp/policy.hpp"
#include "json.hpp"

namespace fleetmdp {

ValueTables::ValueTables(AggregationSpec agg, const FleetParams& fleet,
                         double demand_value_coeff, bool demand_table_mode)
    : agg_(agg),
      fleet_type_(fleet.type),
      max_range_(fleet.max_range),
      capacity_(fleet.capacity),
      demand_coeff_(demand_value_coeff),
      demand_table_(demand_table_mode) {
  if (agg_.range_bins < 1 || agg_.time_bins < 1 || agg_.time_bin_len < 1)
    throw InputError("bad aggregation spec");
}

AggKey ValueTables::key_of(const VehicleAttribute& a) const {
  AggKey k;
  k.loc = a.loc;
  k.dest = a.dest;
  k.range_bin = int(std::min<Seconds>(
      (a.range * agg_.range_bins) / max_range_, agg_.range_bins - 1));
  k.cap_level = a.seats_free == capacity_ ? 1 : 0;
  k.time_bin = int(std::min<Seconds>(a.ready / agg_.time_bin_len, agg_.time_bins - 1));
  return k;
}

double ValueTables::value(const AggKey& k) const {
  auto it = table_.find({k.loc, k.dest});
  if (it == table_.end()) return 0.0;
  return it->second[cell_index(k)];
}

void ValueTables::smooth(const AggKey& k, double estimate, double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw InputError("alpha must be in (0, 1]");
  if (!std::isfinite(estimate)) throw InternalError("non-finite value estimate");
  auto& cells = table_.try_emplace({k.loc, k.dest},
                                   std::vector<double>(cells_per_pair(), 0.0))
                    .first->second;
  double& v = cells[cell_index(k)];
  v = (1.0 - alpha) * v + alpha * estimate;
}

void ValueTables::project_monotone(const AggKey& k) {
  auto it = table_.find({k.loc, k.dest});
  if (it == table_.end()) return;
  auto& cells = it->second;
  const double v = cells[cell_index(k)];
  for (int rb = 0; rb < agg_.range_bins; ++rb)
    for (int cl = 0; cl < 2; ++cl)
      for (int tb = 0; tb < agg_.time_bins; ++tb) {
        int idx = (rb * 2 + cl) * agg_.time_bins + tb;
        bool geq = rb >= k.range_bin && cl >= k.cap_level && tb <= k.time_bin;
        bool leq = rb <= k.range_bin && cl <= k.cap_level && tb >= k.time_bin;
        if (geq && cells[idx] < v) cells[idx] = v;
        if (leq && cells[idx] > v) cells[idx] = v;
      }
}

size_t ValueTables::violation_count() const {
  size_t bad = 0;
  for (const auto& [pair, cells] : table_) {
    // Adjacent comparisons along each axis cover the whole partial order.
    for (int rb = 0; rb < agg_.range_bins; ++rb)
      for (int cl = 0; cl < 2; ++cl)
        for (int tb = 0; tb < agg_.time_bins; ++tb) {
          int idx = (rb * 2 + cl) * agg_.time_bins + tb;
          if (rb + 1 < agg_.range_bins &&
              cells[idx] > cells[((rb + 1) * 2 + cl) * agg_.time_bins + tb])
            ++bad;
          if (cl == 0 && cells[idx] > cells[(rb * 2 + 1) * agg_.time_bins + tb])
            ++bad;
          if (tb + 1 < agg_.time_bins &&
              cells[(rb * 2 + cl) * agg_.time_bins + tb + 1] > cells[idx])
            ++bad;
        }
  }
  return bad;
}

bool ValueTables::is_monotone() const { return violation_count() == 0; }

size_t ValueTables::stored_cells() const {
  size_t n = 0;
  for (const auto& [pair, cells] : table_)
    for (double v : cells)
      if (v != 0.0) ++n;
  return n;
}

std::vector<std::pair<AggKey, double>> ValueTables::entries() const {
  std::vector<std::pair<AggKey, double>> out;
  for (const auto& [pair, cells] : table_)
    for (int rb = 0; rb < agg_.range_bins; ++rb)
      for (int cl = 0; cl < 2; ++cl)
        for (int tb = 0; tb < agg_.time_bins; ++tb) {
          double v = cells[(rb * 2 + cl) * agg_.time_bins + tb];
          if (v != 0.0)
            out.push_back({AggKey{pair.first, pair.second, rb, cl, tb}, v});
        }
  return out;
}

double ValueTables::demand_value(const RequestAttribute& b, int t,
                                 const Horizon& hz) const {
  if (b.respond_by < hz.epoch_time(t + 1)) return 0.0;
  if (demand_table_) {
    auto it = demand_table_values_.find({t, b});
    return it == demand_table_values_.end() ? 0.0 : it->second;
  }
  return demand_coeff_ * b.fare();
}

void ValueTables::smooth_demand(int t, const RequestAttribute& b, double estimate,
                                double alpha) {
  double& v = demand_table_values_[{t, b}];
  v = (1.0 - alpha) * v + alpha * estimate;
}

std::string ValueTables::to_json(uint64_t instance_hash) const {
  nlohmann::json j;
  j["format_version"] = 1;
  j["kind"] = "value-tables";
  j["aggregation"] = {{"range_bins", agg_.range_bins},
                      {"time_bin_len", agg_.time_bin_len},
                      {"time_bins", agg_.time_bins}};
  j["fleet_type"] = to_string(fleet_type_);
  j["max_range"] = max_range_;
  j["capacity"] = capacity_;
  j["demand_value_coeff"] = demand_coeff_;
  j["demand_table_mode"] = demand_table_;
  char buf[32];
  snprintf(buf, sizeof buf, "%016llx", (unsigned long long)instance_hash);
  j["instance_hash"] = std::string(buf);
  auto entries = nlohmann::json::array();
  for (const auto& [pair, cells] : table_) {
    for (int rb = 0; rb < agg_.range_bins; ++rb)
      for (int cl = 0; cl < 2; ++cl)
        for (int tb = 0; tb < agg_.time_bins; ++tb) {
          double v = cells[(rb * 2 + cl) * agg_.time_bins + tb];
          if (v != 0.0)
            entries.push_back({pair.first, pair.second, rb, cl, tb, v});
        }
  }
  j["entries"] = entries;
  auto dem = nlohmann::json::array();
  for (const auto& [key, v] : demand_table_values_) {
    const auto& [t, b] = key;
    if (v != 0.0)
      dem.push_back({t, b.origin, b.dest, b.heads, b.respond_by, b.pickup_by,
                     b.fare_cents, v});
  }
  j["demand_entries"] = dem;
  return j.dump();
}

ValueTables ValueTables::from_json(const std::string& text, uint64_t* instance_hash) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("value tables parse error: ") + e.what());
  }
  try {
    if (j.at("format_version").get<int>() != 1 || j.at("kind") != "value-tables")
      throw DataError("value tables: unsupported format");
    AggregationSpec agg;
    agg.range_bins = j.at("aggregation").at("range_bins").get<int>();
    agg.time_bin_len = j.at("aggregation").at("time_bin_len").get<Seconds>();
    agg.time_bins = j.at("aggregation").at("time_bins").get<int>();
    FleetParams fleet = FleetParams::of(fleet_type_from_string(j.at("fleet_type")));
    fleet.max_range = j.at("max_range").get<Seconds>();
    fleet.capacity = j.at("capacity").get<int>();
    ValueTables t(agg, fleet, j.at("demand_value_coeff").get<double>(),
                  j.at("demand_table_mode").get<bool>());
    if (instance_hash)
      *instance_hash = std::stoull(j.at("instance_hash").get<std::string>(), nullptr, 16);
    for (const auto& e : j.at("entries")) {
      AggKey k{e[0].get<NodeId>(), e[1].get<NodeId>(), e[2].get<int>(),
               e[3].get<int>(), e[4].get<int>()};
      auto& cells = t.table_.try_emplace({k.loc, k.dest},
                                         std::vector<double>(t.cells_per_pair(), 0.0))
                        .first->second;
      cells[t.cell_index(k)] = e[5].get<double>();
    }
    for (const auto& e : j.at("demand_entries")) {
      RequestAttribute b{e[1].get<NodeId>(), e[2].get<NodeId>(), e[3].get<int>(),
                         e[4].get<Seconds>(), e[5].get<Seconds>(), e[6].get<int64_t>()};
      t.demand_table_values_[{e[0].get<int>(), b}] = e[7].get<double>();
    }
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("value tables: missing field: ") + e.what());
  }
}

uint64_t ValueTables::content_hash() const { return fnv1a(to_json(0)); }

double learning_rate(int n, double a) {
  if (n < 1) throw InputError("iteration index must be >= 1");
  if (a <= 0) throw InputError("learning-rate parameter must be positive");
  return a / (a + double(n) - 1.0);
}

void update_tables(ValueTables& tables,
                   const std::map<VehicleAttribute, double>& resource_estimates,
                   const std::map<std::pair<int, RequestAttribute>, double>&
                       demand_estimates,
                   double alpha) {
  for (const auto& [attr, estimate] : resource_estimates) {
    AggKey k = tables.key_of(attr);
    tables.smooth(k, estimate, alpha);
    tables.project_monotone(k);
  }
  if (tables.demand_table_mode())
    for (const auto& [key, estimate] : demand_estimates)
      tables.smooth_demand(key.first, key.second, estimate, alpha);
}

namespace {

SystemState initial_state(const Instance& inst, const FleetParams& fleet,
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

std::map<int, std::map<RequestAttribute, Count>> demand_by_epoch(
    const SamplePath& path, const Horizon& hz) {
  std::map<int, std::map<RequestAttribute, Count>> out;
  for (const TimedRequest& r : path.requests) {
    int e = hz.epoch_of(r.reveal);
    if (e < 1) e = 1;
    if (e > hz.epochs) continue;
    out[e][r.req] += 1;
  }
  return out;
}

}  // namespace

TrainResult train(const Instance& inst, const FleetParams& fleet,
                  const TrainConfig& cfg, uint64_t instance_hash) {
  if (cfg.iterations < 1) throw InputError("training needs at least one iteration");
  if (inst.train_paths.empty()) throw InputError("instance has no training sample paths");

  PolicyContext ctx;
  ctx.net = inst.network.get();
  ctx.fleet = fleet;
  ctx.cost = cfg.cost;
  ctx.horizon = inst.horizon;
  ctx.enum_cfg.include_pooling = cfg.pooling;

  TrainResult res;
  res.tables = ValueTables(cfg.agg, fleet, cfg.demand_value_coeff, cfg.demand_table_mode);

  for (int n = 1; n <= cfg.iterations; ++n) {
    const int path_idx = (n - 1) % int(inst.train_paths.size());
    const SamplePath& path = inst.path(false, path_idx);
    auto demand = demand_by_epoch(path, inst.horizon);
    SystemState s = initial_state(inst, fleet, false, path_idx);
    if (auto it = demand.find(1); it != demand.end()) s.requests = it->second;

    std::mt19937_64 rng(splitmix64(cfg.seed) ^ splitmix64(uint64_t(n) * 0x9e37U));
    const double alpha = learning_rate(n, cfg.learning_rate_a);
    double reward = 0.0;

    for (int t = 1; t <= inst.horizon.epochs; ++t) {
      SurrogateResult step = decide_surrogate(s, res.tables, rng, ctx);
      for (const auto& [a, d, c] : step.decisions)
        reward += contribution(a, d, ctx.cost, fleet) * double(c);

      std::map<std::pair<int, RequestAttribute>, double> dem_est;
      for (const auto& [b, v] : step.demand_duals) dem_est[{t, b}] = v;
      update_tables(res.tables, step.resource_duals, dem_est, alpha);

      std::map<RequestAttribute, Count> incoming;
      if (auto it = demand.find(t + 1); it != demand.end()) incoming = it->second;
      s = apply_decisions(s, step.decisions, incoming, *inst.network, fleet,
                          inst.horizon);
    }
    res.curve.push_back(reward);

    if (!cfg.checkpoint_dir.empty() && cfg.checkpoint_every > 0 &&
        (n % cfg.checkpoint_every == 0 || n == cfg.iterations)) {
      std::filesystem::create_directories(cfg.checkpoint_dir);
      std::ofstream f(cfg.checkpoint_dir + "/tables_" + std::to_string(n) + ".json");
      f << res.tables.to_json(instance_hash);
    }
  }
  return res;
}

}  // namespace fleetmdp
