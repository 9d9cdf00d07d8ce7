#include "fleetmdp/network.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <sstream>

#include "json.hpp"

namespace fleetmdp {

namespace {
constexpr Seconds kInf = std::numeric_limits<Seconds>::max() / 4;
}

Network::Network(NodeId node_count, std::vector<Arc> arcs,
                 std::vector<std::pair<double, double>> coords)
    : node_count_(node_count), arcs_(std::move(arcs)), coords_(std::move(coords)) {
  if (node_count_ < 1) throw InputError("network needs at least one node");
  if (!coords_.empty() && NodeId(coords_.size()) != node_count_)
    throw InputError("coords size does not match node count");

  adj_.assign(node_count_, {});
  adj_time_.assign(node_count_, {});
  std::stable_sort(arcs_.begin(), arcs_.end(), [](const Arc& a, const Arc& b) {
    return std::tie(a.from, a.to) < std::tie(b.from, b.to);
  });
  for (const Arc& a : arcs_) {
    if (a.from < 0 || a.from >= node_count_ || a.to < 0 || a.to >= node_count_)
      throw InputError("arc endpoint out of range");
    if (a.from == a.to) throw InputError("self-loop arc");
    if (a.seconds <= 0) throw InputError("arc travel time must be positive");
    adj_[a.from].push_back(a.to);
    adj_time_[a.from].push_back(a.seconds);
  }

  // All-pairs shortest times by repeated Dijkstra.
  dist_.assign(node_count_, std::vector<Seconds>(node_count_, kInf));
  using Item = std::pair<Seconds, NodeId>;
  for (NodeId s = 0; s < node_count_; ++s) {
    auto& d = dist_[s];
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    d[s] = 0;
    pq.emplace(0, s);
    while (!pq.empty()) {
      auto [du, u] = pq.top();
      pq.pop();
      if (du != d[u]) continue;
      for (size_t i = 0; i < adj_[u].size(); ++i) {
        NodeId v = adj_[u][i];
        Seconds nd = du + adj_time_[u][i];
        if (nd < d[v]) {
          d[v] = nd;
          pq.emplace(nd, v);
        }
      }
    }
  }

  if (node_count_ > 1) {
    for (NodeId s = 0; s < node_count_; ++s)
      for (NodeId t = 0; t < node_count_; ++t)
        if (dist_[s][t] >= kInf)
          throw InputError("network is not strongly connected: no path " +
                           std::to_string(s) + " -> " + std::to_string(t));
  }
}

void Network::check_node(NodeId u) const {
  if (u < 0 || u >= node_count_)
    throw InputError("unknown node id " + std::to_string(u));
}

Seconds Network::shortest_time(NodeId u, NodeId v) const {
  check_node(u);
  check_node(v);
  return dist_[u][v];
}

const std::vector<NodeId>& Network::out_neighbors(NodeId u) const {
  check_node(u);
  return adj_[u];
}

std::optional<Seconds> Network::arc_time(NodeId u, NodeId v) const {
  check_node(u);
  check_node(v);
  for (size_t i = 0; i < adj_[u].size(); ++i)
    if (adj_[u][i] == v) return adj_time_[u][i];
  return std::nullopt;
}

PathPlan Network::shortest_path(NodeId u, NodeId v) const {
  check_node(u);
  check_node(v);
  PathPlan p;
  p.waypoints.push_back(u);
  NodeId cur = u;
  while (cur != v) {
    // Next hop: smallest-id out-neighbor that stays on a shortest path.
    NodeId next = -1;
    Seconds leg = 0;
    for (size_t i = 0; i < adj_[cur].size(); ++i) {
      NodeId w = adj_[cur][i];
      if (adj_time_[cur][i] + dist_[w][v] == dist_[cur][v]) {
        next = w;
        leg = adj_time_[cur][i];
        break;  // neighbors sorted by id
      }
    }
    if (next < 0) throw InternalError("shortest_path: no progress toward target");
    p.waypoints.push_back(next);
    p.leg_times.push_back(leg);
    p.total_time += leg;
    cur = next;
  }
  return p;
}

PathPlan Network::path_through(const std::vector<NodeId>& stops) const {
  if (stops.empty()) throw InputError("path_through needs at least one stop");
  PathPlan out;
  out.waypoints.push_back(stops[0]);
  for (size_t i = 1; i < stops.size(); ++i) {
    PathPlan leg = shortest_path(stops[i - 1], stops[i]);
    for (size_t j = 1; j < leg.waypoints.size(); ++j) {
      out.waypoints.push_back(leg.waypoints[j]);
      out.leg_times.push_back(leg.leg_times[j - 1]);
    }
    out.total_time += leg.total_time;
  }
  return out;
}

std::string Network::to_json() const {
  nlohmann::json j;
  j["format_version"] = 1;
  j["nodes"] = node_count_;
  auto arr = nlohmann::json::array();
  for (const Arc& a : arcs_) arr.push_back({a.from, a.to, a.seconds});
  j["arcs"] = arr;
  if (!coords_.empty()) {
    auto cs = nlohmann::json::array();
    for (auto& [x, y] : coords_) cs.push_back({x, y});
    j["coords"] = cs;
  }
  return j.dump(2);
}

Network Network::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("network json parse error: ") + e.what());
  }
  if (!j.contains("format_version") || j["format_version"].get<int>() != 1)
    throw DataError("network json: unsupported format_version");
  if (!j.contains("nodes") || !j.contains("arcs"))
    throw DataError("network json: missing nodes or arcs");
  NodeId n = j["nodes"].get<NodeId>();
  std::vector<Arc> arcs;
  for (const auto& e : j["arcs"]) {
    if (!e.is_array() || e.size() != 3) throw DataError("network json: bad arc entry");
    arcs.push_back({e[0].get<NodeId>(), e[1].get<NodeId>(), e[2].get<Seconds>()});
  }
  std::vector<std::pair<double, double>> coords;
  if (j.contains("coords"))
    for (const auto& e : j["coords"])
      coords.emplace_back(e[0].get<double>(), e[1].get<double>());
  return Network(n, std::move(arcs), std::move(coords));
}

Network build_grid(int rows, int cols, Seconds arc_time) {
  if (rows < 1 || cols < 1) throw InputError("grid dimensions must be >= 1");
  if (arc_time <= 0) throw InputError("grid arc time must be positive");
  auto id = [cols](int r, int c) { return NodeId(r * cols + c); };
  std::vector<Arc> arcs;
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      if (c + 1 < cols) {
        arcs.push_back({id(r, c), id(r, c + 1), arc_time});
        arcs.push_back({id(r, c + 1), id(r, c), arc_time});
      }
      if (r + 1 < rows) {
        arcs.push_back({id(r, c), id(r + 1, c), arc_time});
        arcs.push_back({id(r + 1, c), id(r, c), arc_time});
      }
    }
  return Network(NodeId(rows * cols), std::move(arcs));
}

}  // namespace fleetmdp
