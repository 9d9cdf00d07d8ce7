// fleetmdp: simulate and train policies for a pooling-enabled ride-hailing
// fleet. Subcommands: generate | ingest | train | eval | inspect.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "fleetmdp/instance_io.hpp"
#include "fleetmdp/learn.hpp"
#include "fleetmdp/simulate.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using namespace fleetmdp;

namespace {

struct CommonOpts {
  std::string instance_dir;
  std::string fleet_type = "dcfc";
  bool pooling = false;
  uint64_t seed = 1;
  double kappa = 0.0;
  double recharge_price = 0.0;
  int jobs = 1;
};

FleetParams fleet_of(const CommonOpts& o) {
  return FleetParams::of(fleet_type_from_string(o.fleet_type));
}

PolicyContext context_of(const Instance& inst, const CommonOpts& o) {
  PolicyContext ctx;
  ctx.net = inst.network.get();
  ctx.fleet = fleet_of(o);
  ctx.cost.detour_per_second = o.kappa;
  ctx.cost.recharge_per_range_second = o.recharge_price;
  ctx.horizon = inst.horizon;
  ctx.enum_cfg.include_pooling = o.pooling;
  return ctx;
}

void write_manifest(const std::string& path, const std::string& command,
                    const std::map<std::string, std::string>& config,
                    uint64_t instance_hash) {
  nlohmann::json j;
  j["command"] = command;
  j["config"] = config;
  char buf[32];
  snprintf(buf, sizeof buf, "%016llx", (unsigned long long)instance_hash);
  j["instance_hash"] = std::string(buf);
  std::string cfg_text = nlohmann::json(config).dump();
  snprintf(buf, sizeof buf, "%016llx", (unsigned long long)fnv1a(cfg_text));
  j["config_hash"] = std::string(buf);
  write_file(path, j.dump(2));
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << std::fixed << v;
  return os.str();
}

int cmd_generate(const std::string& out_dir, const SyntheticSpec& spec) {
  Instance inst = generate_synthetic(spec);
  save_instance(inst, out_dir);
  std::map<std::string, std::string> cfg{
      {"rows", std::to_string(spec.rows)},
      {"cols", std::to_string(spec.cols)},
      {"arc_time", std::to_string(spec.arc_time)},
      {"vehicles", std::to_string(spec.vehicles)},
      {"requests_per_day", fmt(spec.requests_per_day)},
      {"train_paths", std::to_string(spec.train_paths)},
      {"test_paths", std::to_string(spec.test_paths)},
      {"hotspot_count", std::to_string(spec.hotspot_count)},
      {"hotspot_weight", fmt(spec.hotspot_weight)},
      {"fare_base", fmt(spec.fare_base)},
      {"fare_per_second", fmt(spec.fare_per_second)},
      {"seed", std::to_string(spec.seed)}};
  write_manifest(out_dir + "/manifest.json", "generate", cfg,
                 instance_content_hash(out_dir));
  std::cout << "instance written to " << out_dir << " ("
            << inst.network->node_count() << " nodes, fleet "
            << inst.fleet_size << ", " << inst.train_paths.size() << "+"
            << inst.test_paths.size() << " paths)\n";
  return 0;
}

struct IngestOpts {
  std::string trips_csv;
  std::string out_dir;
  std::string format = "coords";  // coords | zones
  double fraction = 0.01;
  int train_paths = 200;
  int test_paths = 30;
  uint64_t seed = 7;
  double cell_width = 215.0;
  double cell_height = 280.0;
  std::string adjacency;    // zones: arc list file "u v [seconds]" per line
  std::string taxi_counts;  // csv "unix_ts,count"
  double base_fare = 2.50;
  double min_speed_kmh = 7.0;
  double max_speed_kmh = 80.467;
  Count fleet_override = 0;
};

std::vector<RawTrip> read_trips_csv(const std::string& path, bool zones) {
  std::ifstream f(path);
  if (!f) throw InputError("cannot open " + path);
  std::string header;
  if (!std::getline(f, header)) throw InputError("empty trips file");
  std::vector<std::string> cols;
  {
    std::istringstream hs(header);
    std::string c;
    while (std::getline(hs, c, ',')) cols.push_back(c);
  }
  auto col = [&](const std::string& name) {
    for (size_t i = 0; i < cols.size(); ++i)
      if (cols[i] == name) return int(i);
    throw InputError("trips csv missing column: " + name);
  };
  int c_time = col("pickup_datetime");
  int c_pax = col("passengers");
  int c_fare = col("fare");
  int c_dur = col("duration_s");
  int c_dist = col("distance_m");
  int c_olat = -1, c_olon = -1, c_dlat = -1, c_dlon = -1, c_puz = -1, c_doz = -1;
  if (zones) {
    c_puz = col("pu_zone");
    c_doz = col("do_zone");
  } else {
    c_olat = col("pickup_lat");
    c_olon = col("pickup_lon");
    c_dlat = col("dropoff_lat");
    c_dlon = col("dropoff_lon");
  }

  std::vector<RawTrip> out;
  size_t skipped = 0;
  std::string line;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    std::vector<std::string> parts;
    std::istringstream ls(line);
    std::string part;
    while (std::getline(ls, part, ',')) parts.push_back(part);
    try {
      RawTrip t;
      t.pickup_unix = std::stoll(parts.at(c_time));
      t.passengers = std::stoi(parts.at(c_pax));
      t.fare = std::stod(parts.at(c_fare));
      t.duration = std::stoll(parts.at(c_dur));
      t.distance_m = std::stod(parts.at(c_dist));
      if (zones) {
        t.ozone = std::stoi(parts.at(c_puz));
        t.dzone = std::stoi(parts.at(c_doz));
      } else {
        t.olat = std::stod(parts.at(c_olat));
        t.olon = std::stod(parts.at(c_olon));
        t.dlat = std::stod(parts.at(c_dlat));
        t.dlon = std::stod(parts.at(c_dlon));
      }
      out.push_back(t);
    } catch (const std::exception&) {
      ++skipped;  // malformed record: count, keep going
    }
  }
  if (skipped > 0)
    std::cerr << "warning: skipped " << skipped << " malformed trip records\n";
  return out;
}

std::vector<std::pair<int64_t, int>> read_taxi_counts(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw InputError("cannot open " + path);
  std::vector<std::pair<int64_t, int>> out;
  std::string line;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    auto comma = line.find(',');
    if (comma == std::string::npos) throw DataError("taxi counts: expected ts,count");
    out.push_back({std::stoll(line.substr(0, comma)),
                   std::stoi(line.substr(comma + 1))});
  }
  return out;
}

int cmd_ingest(const IngestOpts& o) {
  std::vector<RawTrip> raw = read_trips_csv(o.trips_csv, o.format == "zones");
  if (raw.empty()) throw InputError("no usable trip records");

  CleaningRules rules;
  rules.min_fare = o.base_fare;
  rules.min_speed_mps = o.min_speed_kmh * 1000.0 / 3600.0;
  rules.max_speed_mps = o.max_speed_kmh * 1000.0 / 3600.0;
  rules.fare_cap = fare_percentile_cap(raw, 0.95);
  std::vector<RawTrip> cleaned = clean_trips(raw, rules);
  if (cleaned.empty()) throw InputError("cleaning removed every trip");
  std::cout << "cleaned " << raw.size() << " -> " << cleaned.size() << " trips\n";

  Horizon hz;
  std::shared_ptr<Network> net;
  std::function<std::pair<NodeId, NodeId>(const RawTrip&)> nodes_of;

  if (o.format == "zones") {
    if (o.adjacency.empty())
      throw InputError("zone format needs --adjacency (bordering zones and bridges)");
    // Zone ids are renumbered densely in sorted order.
    std::set<int> zone_set;
    for (const auto& t : cleaned) {
      zone_set.insert(t.ozone);
      zone_set.insert(t.dzone);
    }
    std::map<int, NodeId> zid;
    for (int z : zone_set) zid[z] = NodeId(zid.size());
    // Median trip duration per zone pair feeds arc times.
    std::map<std::pair<int, int>, std::vector<Seconds>> durs;
    for (const auto& t : cleaned) durs[{t.ozone, t.dzone}].push_back(t.duration);
    std::ifstream adj(o.adjacency);
    if (!adj) throw InputError("cannot open " + o.adjacency);
    std::vector<Arc> arcs;
    std::string line;
    while (std::getline(adj, line)) {
      if (line.empty() || line[0] == '#') continue;
      std::istringstream ls(line);
      int u, v;
      Seconds sec = -1;
      ls >> u >> v;
      if (!(ls >> sec)) sec = -1;
      if (!zid.count(u) || !zid.count(v)) continue;
      if (sec < 0) {
        auto it = durs.find({u, v});
        if (it == durs.end() || it->second.empty())
          throw InputError("no trips between zones " + std::to_string(u) + " and " +
                           std::to_string(v) + "; give the arc an explicit time");
        auto& d = it->second;
        std::sort(d.begin(), d.end());
        sec = d[d.size() / 2];
      }
      arcs.push_back({zid[u], zid[v], sec});
    }
    net = std::make_shared<Network>(NodeId(zid.size()), arcs);
    nodes_of = [zid](const RawTrip& t) {
      return std::pair<NodeId, NodeId>{zid.at(t.ozone), zid.at(t.dzone)};
    };
  } else {
    // Bounding box over the cleaned coordinates, then equal rectangles with
    // 4-neighbor arcs timed by the duration regression.
    GridSpec grid;
    grid.cell_width_m = o.cell_width;
    grid.cell_height_m = o.cell_height;
    grid.lat_min = grid.lat_max = cleaned[0].olat;
    grid.lon_min = grid.lon_max = cleaned[0].olon;
    for (const auto& t : cleaned) {
      for (double lat : {t.olat, t.dlat}) {
        grid.lat_min = std::min(grid.lat_min, lat);
        grid.lat_max = std::max(grid.lat_max, lat);
      }
      for (double lon : {t.olon, t.dlon}) {
        grid.lon_min = std::min(grid.lon_min, lon);
        grid.lon_max = std::max(grid.lon_max, lon);
      }
    }
    double beta = fit_duration_model(cleaned);
    std::cout << "duration model slope " << beta << " s/m over " << grid.rows()
              << "x" << grid.cols() << " cells\n";
    int rows = grid.rows(), colsn = grid.cols();
    std::vector<Arc> arcs;
    auto cell_center = [&](int row, int colx) {
      double lat = grid.lat_min + (double(row) + 0.5) *
                                      (grid.lat_max - grid.lat_min) / double(rows);
      double lon = grid.lon_min + (double(colx) + 0.5) *
                                      (grid.lon_max - grid.lon_min) / double(colsn);
      return std::pair<double, double>{lat, lon};
    };
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < colsn; ++c) {
        auto [lat0, lon0] = cell_center(r, c);
        auto add = [&](int r2, int c2) {
          auto [lat1, lon1] = cell_center(r2, c2);
          Seconds sec = std::max<Seconds>(
              1, llround(beta * haversine(lat0, lon0, lat1, lon1)));
          arcs.push_back({NodeId(r * colsn + c), NodeId(r2 * colsn + c2), sec});
        };
        if (c + 1 < colsn) add(r, c + 1);
        if (c > 0) add(r, c - 1);
        if (r + 1 < rows) add(r + 1, c);
        if (r > 0) add(r - 1, c);
      }
    net = std::make_shared<Network>(NodeId(rows * colsn), arcs);
    nodes_of = [grid](const RawTrip& t) {
      return std::pair<NodeId, NodeId>{NodeId(discretize(t.olat, t.olon, grid)),
                                       NodeId(discretize(t.dlat, t.dlon, grid))};
    };
  }

  std::mt19937_64 rng(splitmix64(o.seed));
  std::vector<std::pair<int64_t, int>> counts;
  const std::vector<std::pair<int64_t, int>>* counts_ptr = nullptr;
  if (!o.taxi_counts.empty()) {
    counts = read_taxi_counts(o.taxi_counts);
    counts_ptr = &counts;
  }
  SampledPaths train = sample_demand_paths(cleaned, nodes_of, o.fraction,
                                           o.train_paths, hz, rng, counts_ptr);
  SampledPaths test = sample_demand_paths(cleaned, nodes_of, o.fraction,
                                          o.test_paths, hz, rng, counts_ptr);

  Instance inst;
  inst.name = fs::path(o.trips_csv).stem().string();
  inst.network = net;
  inst.horizon = hz;
  inst.fleet_size = o.fleet_override > 0 ? o.fleet_override
                                         : std::max<Count>(1, train.fleet_size);
  inst.train_paths = std::move(train.paths);
  inst.test_paths = std::move(test.paths);
  for (int i = 0; i < o.train_paths + o.test_paths; ++i) {
    std::vector<InitialVehicle> fleet;
    for (Count v = 0; v < inst.fleet_size; ++v)
      fleet.push_back({NodeId(uniform_int(rng, 0, net->node_count() - 1)),
                       uniform01(rng)});
    if (i < o.train_paths)
      inst.train_initial.push_back(std::move(fleet));
    else
      inst.test_initial.push_back(std::move(fleet));
  }
  save_instance(inst, o.out_dir);
  std::map<std::string, std::string> cfg{
      {"trips", o.trips_csv},        {"format", o.format},
      {"fraction", fmt(o.fraction)}, {"seed", std::to_string(o.seed)},
      {"train_paths", std::to_string(o.train_paths)},
      {"test_paths", std::to_string(o.test_paths)}};
  write_manifest(o.out_dir + "/manifest.json", "ingest", cfg,
                 instance_content_hash(o.out_dir));
  std::cout << "instance written to " << o.out_dir << " (fleet "
            << inst.fleet_size << ")\n";
  return 0;
}

struct TrainOpts {
  CommonOpts common;
  std::string out_dir;
  int iterations = 200;
  double learning_rate_a = 300.0;
  int checkpoint_every = 100;
  bool demand_table = false;
  double demand_coeff = 0.9;
  int range_bins = 9;
  Seconds time_bin_len = 300;
};

int cmd_train(const TrainOpts& o) {
  Instance inst = load_instance(o.common.instance_dir);
  uint64_t ihash = instance_content_hash(o.common.instance_dir);
  FleetParams fleet = fleet_of(o.common);

  TrainConfig cfg;
  cfg.iterations = o.iterations;
  cfg.learning_rate_a = o.learning_rate_a;
  cfg.seed = o.common.seed;
  cfg.pooling = o.common.pooling;
  cfg.checkpoint_every = o.checkpoint_every;
  cfg.demand_value_coeff = o.demand_coeff;
  cfg.demand_table_mode = o.demand_table;
  cfg.cost.detour_per_second = o.common.kappa;
  cfg.cost.recharge_per_range_second = o.common.recharge_price;
  cfg.agg.range_bins = o.range_bins;
  cfg.agg.time_bin_len = o.time_bin_len;
  cfg.agg.time_bins =
      int((inst.horizon.end_time() + o.time_bin_len - 1) / o.time_bin_len);
  fs::create_directories(o.out_dir);
  cfg.checkpoint_dir = o.out_dir + "/checkpoints";

  TrainResult res = train(inst, fleet, cfg, ihash);

  write_file(o.out_dir + "/tables.json", res.tables.to_json(ihash));
  std::ostringstream curve;
  curve << "iteration,reward\n";
  for (size_t i = 0; i < res.curve.size(); ++i)
    curve << (i + 1) << "," << fmt(res.curve[i]) << "\n";
  write_file(o.out_dir + "/curve.csv", curve.str());
  std::map<std::string, std::string> mcfg{
      {"instance", o.common.instance_dir},
      {"fleet_type", o.common.fleet_type},
      {"pooling", o.common.pooling ? "true" : "false"},
      {"iterations", std::to_string(o.iterations)},
      {"learning_rate_a", fmt(o.learning_rate_a)},
      {"demand_coeff", fmt(o.demand_coeff)},
      {"demand_table", o.demand_table ? "true" : "false"},
      {"kappa", fmt(o.common.kappa)},
      {"recharge_price", fmt(o.common.recharge_price)},
      {"seed", std::to_string(o.common.seed)}};
  write_manifest(o.out_dir + "/manifest.json", "train", mcfg, ihash);
  std::cout << "trained " << o.iterations << " iterations; "
            << res.tables.stored_cells() << " table cells; final reward "
            << fmt(res.curve.empty() ? 0.0 : res.curve.back()) << "\n"
            << "tables: " << o.out_dir << "/tables.json\n";
  return 0;
}

struct EvalOpts {
  CommonOpts common;
  std::string policy = "pm";  // myopic | pm | vfa
  std::string tables_path;
  double theta = 0.1;
  std::string out_dir;
  bool emit_telemetry = false;
  std::string dump_state_dir;
  std::string dump_lp_path;
};

int cmd_eval(const EvalOpts& o) {
  Instance inst = load_instance(o.common.instance_dir);
  uint64_t ihash = instance_content_hash(o.common.instance_dir);
  PolicyContext ctx = context_of(inst, o.common);

  PolicySpec spec;
  ValueTables tables;
  if (o.policy == "myopic") {
    spec.kind = PolicySpec::Kind::Myopic;
  } else if (o.policy == "pm") {
    spec.kind = PolicySpec::Kind::PM;
    spec.theta = o.theta;
  } else if (o.policy == "vfa") {
    spec.kind = PolicySpec::Kind::VFA;
    if (o.tables_path.empty()) throw InputError("vfa policy needs --tables");
    uint64_t thash = 0;
    tables = ValueTables::from_json(read_file(o.tables_path), &thash);
    if (thash != 0 && thash != ihash)
      throw InputError("tables were trained on a different instance");
    if (tables.fleet_type() != ctx.fleet.type)
      throw InputError("tables were trained for fleet type " +
                       to_string(tables.fleet_type()));
    spec.tables = &tables;
  } else {
    throw InputError("unknown policy: " + o.policy);
  }

  fs::create_directories(o.out_dir);
  if (!o.dump_state_dir.empty() || !o.dump_lp_path.empty()) {
    EpisodeOptions opts;
    opts.dump_state_dir = o.dump_state_dir;
    opts.dump_lp_path = o.dump_lp_path;
    run_episode(inst, spec, 0, true, ctx, opts);
  }

  EvalResult res = evaluate(inst, spec, ctx, o.common.jobs, o.emit_telemetry);

  std::ostringstream episodes;
  episodes << "path_id,reward,fares_available,rfr,revealed,served,lost,"
              "single,multi,pool,queue,relocate,continue,idle,recharge\n";
  for (const auto& e : res.episodes) {
    episodes << e.path_id << "," << fmt(e.reward) << "," << fmt(e.fares_available)
             << "," << fmt(e.rfr) << "," << e.revealed << "," << e.served << ","
             << e.lost;
    for (Count c : e.decision_counts) episodes << "," << c;
    episodes << "\n";
  }
  write_file(o.out_dir + "/episodes.csv", episodes.str());

  std::ostringstream results;
  results << "instance,policy,fleet_type,pooling,n_paths,"
             "reward_mean,reward_median,reward_iqr,reward_me,"
             "rfr_mean,rfr_median,rfr_iqr,rfr_me\n";
  results << inst.name << "," << o.policy << "," << o.common.fleet_type << ","
          << (o.common.pooling ? "true" : "false") << "," << res.episodes.size()
          << "," << fmt(res.reward.mean) << "," << fmt(res.reward.median) << ","
          << fmt(res.reward.iqr) << "," << fmt(res.reward.me) << ","
          << fmt(res.rfr.mean) << "," << fmt(res.rfr.median) << ","
          << fmt(res.rfr.iqr) << "," << fmt(res.rfr.me) << "\n";
  write_file(o.out_dir + "/results.csv", results.str());

  if (o.emit_telemetry) {
    std::ostringstream tel;
    for (const auto& e : res.episodes) {
      for (const auto& row : e.telemetry) {
        nlohmann::json j;
        j["path_id"] = e.path_id;
        j["epoch"] = row.epoch;
        j["mean_range"] = row.mean_range;
        j["passengers_on_board"] = row.passengers_on_board;
        j["backlog"] = row.backlog;
        nlohmann::json counts;
        for (int k = 0; k < 8; ++k)
          counts[to_string(DecisionKind(k))] = row.decision_counts[k];
        j["decisions"] = counts;
        tel << j.dump() << "\n";
      }
    }
    write_file(o.out_dir + "/telemetry.jsonl", tel.str());
  }

  std::map<std::string, std::string> mcfg{
      {"instance", o.common.instance_dir}, {"policy", o.policy},
      {"fleet_type", o.common.fleet_type},
      {"pooling", o.common.pooling ? "true" : "false"},
      {"theta", fmt(o.theta)},             {"tables", o.tables_path},
      {"kappa", fmt(o.common.kappa)},
      {"recharge_price", fmt(o.common.recharge_price)},
      {"seed", std::to_string(o.common.seed)}};
  write_manifest(o.out_dir + "/manifest.json", "eval", mcfg, ihash);

  std::cout << "policy " << o.policy << " fleet " << o.common.fleet_type
            << (o.common.pooling ? " pooling" : " no-pooling") << " over "
            << res.episodes.size() << " paths\n"
            << "  reward mean " << fmt(res.reward.mean) << " median "
            << fmt(res.reward.median) << " iqr " << fmt(res.reward.iqr)
            << " me " << fmt(res.reward.me) << "\n"
            << "  rfr    mean " << fmt(res.rfr.mean) << " median "
            << fmt(res.rfr.median) << " iqr " << fmt(res.rfr.iqr) << " me "
            << fmt(res.rfr.me) << "\n";
  return 0;
}

int cmd_inspect(const std::string& instance_dir, const std::string& tables_path) {
  if (!instance_dir.empty()) {
    Instance inst = load_instance(instance_dir);
    std::cout << "instance " << inst.name << "\n"
              << "  nodes " << inst.network->node_count() << ", arcs "
              << inst.network->arcs().size() << "\n"
              << "  fleet " << inst.fleet_size << ", horizon "
              << inst.horizon.epochs << " x " << inst.horizon.epoch_len << " s\n"
              << "  paths " << inst.train_paths.size() << " train / "
              << inst.test_paths.size() << " test\n";
    std::vector<Count> per_hour(24, 0);
    Count total = 0;
    for (const auto& p : inst.test_paths)
      for (const auto& r : p.requests) {
        per_hour[size_t(r.reveal / 3600) % 24] += 1;
        ++total;
      }
    if (!inst.test_paths.empty()) {
      std::cout << "  test requests per path (mean) "
                << double(total) / double(inst.test_paths.size()) << "\n"
                << "  reveal histogram by hour:";
      for (int h = 0; h < 24; ++h) std::cout << " " << per_hour[h];
      std::cout << "\n";
    }
  }
  if (!tables_path.empty()) {
    uint64_t hash = 0;
    ValueTables t = ValueTables::from_json(read_file(tables_path), &hash);
    char buf[32];
    snprintf(buf, sizeof buf, "%016llx", (unsigned long long)hash);
    std::cout << "tables for fleet " << to_string(t.fleet_type())
              << ", instance " << buf << "\n"
              << "  cells " << t.stored_cells() << ", monotone: "
              << (t.is_monotone() ? "true" : "false") << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pooling-enabled ride-hailing fleet simulator and policies"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key = value config file; flags override");

  auto add_common = [](CLI::App* cmd, CommonOpts& o, bool needs_instance) {
    auto* inst = cmd->add_option("--instance", o.instance_dir, "instance directory");
    if (needs_instance) inst->required();
    cmd->add_option("--fleet-type", o.fleet_type, "ice | dcfc | l2c");
    cmd->add_flag("--pooling", o.pooling, "enable Multi and Pool decisions");
    cmd->add_option("--seed", o.seed, "root random seed");
    cmd->add_option("--kappa", o.kappa, "detour penalty in $/s");
    cmd->add_option("--recharge-price", o.recharge_price,
                    "recharge cost in $/s of range refilled");
    cmd->add_option("--jobs", o.jobs, "worker threads for evaluation");
  };

  auto* gen = app.add_subcommand("generate", "create a synthetic grid instance");
  SyntheticSpec spec;
  std::string gen_out;
  gen->add_option("--out", gen_out, "output instance directory")->required();
  gen->add_option("--rows", spec.rows);
  gen->add_option("--cols", spec.cols);
  gen->add_option("--arc-time", spec.arc_time, "grid arc travel time (s)");
  gen->add_option("--vehicles", spec.vehicles);
  gen->add_option("--requests-per-day", spec.requests_per_day);
  gen->add_option("--paths-train", spec.train_paths);
  gen->add_option("--paths-test", spec.test_paths);
  gen->add_option("--hotspots", spec.hotspot_count);
  gen->add_option("--hotspot-weight", spec.hotspot_weight);
  gen->add_option("--fare-base", spec.fare_base);
  gen->add_option("--fare-per-second", spec.fare_per_second);
  gen->add_option("--seed", spec.seed);

  auto* ing = app.add_subcommand("ingest", "build an instance from trip records");
  IngestOpts iopt;
  ing->add_option("--trips", iopt.trips_csv, "trip records csv")->required();
  ing->add_option("--out", iopt.out_dir, "output instance directory")->required();
  ing->add_option("--format", iopt.format, "coords | zones");
  ing->add_option("--fraction", iopt.fraction, "demand and fleet scale factor");
  ing->add_option("--paths-train", iopt.train_paths);
  ing->add_option("--paths-test", iopt.test_paths);
  ing->add_option("--seed", iopt.seed);
  ing->add_option("--cell-width", iopt.cell_width, "grid cell width (m)");
  ing->add_option("--cell-height", iopt.cell_height, "grid cell height (m)");
  ing->add_option("--adjacency", iopt.adjacency, "zone adjacency arc list");
  ing->add_option("--taxi-counts", iopt.taxi_counts, "active taxi counts csv");
  ing->add_option("--base-fare", iopt.base_fare);
  ing->add_option("--min-speed", iopt.min_speed_kmh, "slowest kept trip (km/h)");
  ing->add_option("--max-speed", iopt.max_speed_kmh, "fastest kept trip (km/h)");
  ing->add_option("--fleet-size", iopt.fleet_override,
                  "override the derived fleet size");

  auto* tr = app.add_subcommand("train", "run forward ADP training");
  TrainOpts topt;
  add_common(tr, topt.common, true);
  tr->add_option("--out", topt.out_dir, "output directory")->required();
  tr->add_option("--iterations", topt.iterations, "training sample paths to roll");
  tr->add_option("--learning-rate-a", topt.learning_rate_a,
                 "harmonic step-size parameter");
  tr->add_option("--checkpoint-every", topt.checkpoint_every);
  tr->add_flag("--table-demand-values", topt.demand_table,
               "learn demand values in a table instead of the fare rule");
  tr->add_option("--demand-coeff", topt.demand_coeff,
                 "retained fare fraction of a pending request");
  tr->add_option("--range-bins", topt.range_bins, "range aggregation levels");
  tr->add_option("--time-bin-len", topt.time_bin_len,
                 "actionable-time aggregation bin width (s)");

  auto* ev = app.add_subcommand("eval", "evaluate a policy on the test paths");
  EvalOpts eopt;
  add_common(ev, eopt.common, true);
  ev->add_option("--policy", eopt.policy, "myopic | pm | vfa")->required();
  ev->add_option("--tables", eopt.tables_path, "value tables (vfa)");
  ev->add_option("--theta", eopt.theta, "PM recharge threshold in (0,1]");
  ev->add_option("--out", eopt.out_dir, "output directory")->required();
  ev->add_flag("--emit-telemetry", eopt.emit_telemetry, "write telemetry.jsonl");
  ev->add_option("--dump-state", eopt.dump_state_dir,
                 "write per-epoch state JSON for the first test path");
  ev->add_option("--dump-lp", eopt.dump_lp_path,
                 "write the first epoch's assignment problem in LP format");

  auto* ins = app.add_subcommand("inspect", "summarize an instance or tables");
  std::string ins_instance, ins_tables;
  ins->add_option("--instance", ins_instance, "instance directory");
  ins->add_option("--tables", ins_tables, "tables file");

  try {
    app.parse(argc, argv);
    if (gen->parsed()) return cmd_generate(gen_out, spec);
    if (ing->parsed()) return cmd_ingest(iopt);
    if (tr->parsed()) return cmd_train(topt);
    if (ev->parsed()) return cmd_eval(eopt);
    if (ins->parsed()) {
      if (ins_instance.empty() && ins_tables.empty())
        throw InputError("inspect needs --instance or --tables");
      return cmd_inspect(ins_instance, ins_tables);
    }
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 3;
  } catch (const InternalError& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
  return 0;
}
