#include "fleetmdp/instance_io.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace fs = std::filesystem;

namespace fleetmdp {

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot open " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot write " + path);
  f << text;
}

namespace {

std::string path_file(const std::string& dir, bool test, int idx) {
  char name[48];
  snprintf(name, sizeof name, "%s_%04d.jsonl", test ? "test" : "train", idx);
  return dir + "/paths/" + name;
}

std::string dump_path(const SamplePath& p) {
  std::ostringstream out;
  for (const TimedRequest& r : p.requests) {
    nlohmann::json j = {{"reveal", r.reveal},       {"o", r.req.origin},
                        {"d", r.req.dest},          {"heads", r.req.heads},
                        {"respond_by", r.req.respond_by},
                        {"pickup_by", r.req.pickup_by},
                        {"fare_cents", r.req.fare_cents}};
    out << j.dump() << "\n";
  }
  return out.str();
}

SamplePath parse_path(const std::string& text) {
  SamplePath p;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw DataError(std::string("sample path parse error: ") + e.what());
    }
    TimedRequest r;
    r.reveal = j.at("reveal").get<Seconds>();
    r.req = {j.at("o").get<NodeId>(),      j.at("d").get<NodeId>(),
             j.at("heads").get<int>(),     j.at("respond_by").get<Seconds>(),
             j.at("pickup_by").get<Seconds>(), j.at("fare_cents").get<int64_t>()};
    p.requests.push_back(r);
  }
  return p;
}

}  // namespace

void save_instance(const Instance& inst, const std::string& dir) {
  if (inst.train_paths.size() != inst.train_initial.size() ||
      inst.test_paths.size() != inst.test_initial.size())
    throw InternalError("instance: paths and initial states out of step");
  fs::create_directories(dir + "/paths");

  write_file(dir + "/network.json", inst.network->to_json());

  nlohmann::json meta;
  meta["format_version"] = 1;
  meta["name"] = inst.name;
  meta["fleet_size"] = inst.fleet_size;
  meta["horizon"] = {{"epochs", inst.horizon.epochs},
                     {"epoch_len", inst.horizon.epoch_len}};
  meta["train_paths"] = inst.train_paths.size();
  meta["test_paths"] = inst.test_paths.size();
  write_file(dir + "/meta.json", meta.dump(2));

  for (size_t i = 0; i < inst.train_paths.size(); ++i)
    write_file(path_file(dir, false, int(i)), dump_path(inst.train_paths[i]));
  for (size_t i = 0; i < inst.test_paths.size(); ++i)
    write_file(path_file(dir, true, int(i)), dump_path(inst.test_paths[i]));

  std::ostringstream init;
  auto dump_initial = [&](const char* kind, size_t idx,
                          const std::vector<InitialVehicle>& fleet) {
    nlohmann::json j;
    j["kind"] = kind;
    j["index"] = idx;
    auto arr = nlohmann::json::array();
    for (const InitialVehicle& v : fleet) arr.push_back({v.loc, v.range_frac});
    j["vehicles"] = arr;
    init << j.dump() << "\n";
  };
  for (size_t i = 0; i < inst.train_initial.size(); ++i)
    dump_initial("train", i, inst.train_initial[i]);
  for (size_t i = 0; i < inst.test_initial.size(); ++i)
    dump_initial("test", i, inst.test_initial[i]);
  write_file(dir + "/initial_states.jsonl", init.str());
}

Instance load_instance(const std::string& dir) {
  if (!fs::exists(dir + "/meta.json"))
    throw InputError("not an instance directory (missing meta.json): " + dir);
  Instance inst;
  nlohmann::json meta;
  try {
    meta = nlohmann::json::parse(read_file(dir + "/meta.json"));
    if (meta.at("format_version").get<int>() != 1)
      throw DataError("instance meta: unsupported format_version");
    inst.name = meta.at("name").get<std::string>();
    inst.fleet_size = meta.at("fleet_size").get<Count>();
    inst.horizon.epochs = meta.at("horizon").at("epochs").get<int>();
    inst.horizon.epoch_len = meta.at("horizon").at("epoch_len").get<Seconds>();
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("instance meta parse error: ") + e.what());
  }
  inst.network = std::make_shared<Network>(
      Network::from_json(read_file(dir + "/network.json")));

  const int n_train = meta.at("train_paths").get<int>();
  const int n_test = meta.at("test_paths").get<int>();
  for (int i = 0; i < n_train; ++i)
    inst.train_paths.push_back(parse_path(read_file(path_file(dir, false, i))));
  for (int i = 0; i < n_test; ++i)
    inst.test_paths.push_back(parse_path(read_file(path_file(dir, true, i))));

  inst.train_initial.resize(n_train);
  inst.test_initial.resize(n_test);
  std::istringstream init(read_file(dir + "/initial_states.jsonl"));
  std::string line;
  while (std::getline(init, line)) {
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
      bool test = j.at("kind").get<std::string>() == "test";
      size_t idx = j.at("index").get<size_t>();
      auto& slot = test ? inst.test_initial : inst.train_initial;
      if (idx >= slot.size()) throw DataError("initial state index out of range");
      std::vector<InitialVehicle> fleet;
      for (const auto& v : j.at("vehicles"))
        fleet.push_back({v[0].get<NodeId>(), v[1].get<double>()});
      slot[idx] = std::move(fleet);
    } catch (const nlohmann::json::exception& e) {
      throw DataError(std::string("initial states parse error: ") + e.what());
    }
  }
  for (const auto& f : inst.train_initial)
    if (f.empty()) throw DataError("missing initial state for a training path");
  for (const auto& f : inst.test_initial)
    if (f.empty()) throw DataError("missing initial state for a test path");

  for (const auto& paths : {inst.train_paths, inst.test_paths})
    for (const auto& p : paths)
      for (const auto& r : p.requests) {
        if (r.req.origin == r.req.dest)
          throw DataError("request with identical origin and destination");
        if (r.req.origin < 0 || r.req.origin >= inst.network->node_count() ||
            r.req.dest < 0 || r.req.dest >= inst.network->node_count())
          throw DataError("request endpoint outside the network");
      }
  return inst;
}

uint64_t instance_content_hash(const std::string& dir) {
  uint64_t h = fnv1a(read_file(dir + "/network.json"));
  return fnv1a(read_file(dir + "/meta.json"), h);
}

}  // namespace fleetmdp
