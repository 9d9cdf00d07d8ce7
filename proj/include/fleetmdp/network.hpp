#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fleetmdp/types.hpp"

namespace fleetmdp {

struct Arc {
  NodeId from = 0;
  NodeId to = 0;
  Seconds seconds = 0;
};

/// A concrete drive: node sequence plus per-leg durations. Range is measured
/// in seconds-of-driving, so total_range == total_time.
struct PathPlan {
  std::vector<NodeId> waypoints;
  std::vector<Seconds> leg_times;
  Seconds total_time = 0;

  Seconds total_range() const { return total_time; }
  NodeId end() const { return waypoints.back(); }

  bool operator==(const PathPlan& o) const {
    return waypoints == o.waypoints && leg_times == o.leg_times &&
           total_time == o.total_time;
  }
  auto operator<=>(const PathPlan& o) const {
    if (auto c = total_time <=> o.total_time; c != 0) return c;
    return waypoints <=> o.waypoints;
  }
};

/// Directed road graph with strictly positive travel times. All-pairs
/// shortest travel times are precomputed at construction; instances are
/// immutable afterwards and safe to share across threads.
class Network {
 public:
  Network(NodeId node_count, std::vector<Arc> arcs,
          std::vector<std::pair<double, double>> coords = {});

  NodeId node_count() const { return node_count_; }
  const std::vector<Arc>& arcs() const { return arcs_; }
  const std::vector<std::pair<double, double>>& coords() const { return coords_; }

  /// Shortest travel time u -> v in seconds; 0 iff u == v.
  Seconds shortest_time(NodeId u, NodeId v) const;

  /// Shortest path u -> v; among equal-time paths picks the one whose next
  /// node id is smallest at every step.
  PathPlan shortest_path(NodeId u, NodeId v) const;

  /// Concatenates shortest paths through the given stops (first entry is the
  /// start node). Total time equals the sum of the stop-to-stop times.
  PathPlan path_through(const std::vector<NodeId>& stops) const;

  const std::vector<NodeId>& out_neighbors(NodeId u) const;
  std::optional<Seconds> arc_time(NodeId u, NodeId v) const;

  std::string to_json() const;
  static Network from_json(const std::string& text);

 private:
  void check_node(NodeId u) const;

  NodeId node_count_ = 0;
  std::vector<Arc> arcs_;
  std::vector<std::pair<double, double>> coords_;
  std::vector<std::vector<NodeId>> adj_;          // out-neighbors, sorted
  std::vector<std::vector<Seconds>> adj_time_;    // parallel to adj_
  std::vector<std::vector<Seconds>> dist_;        // all-pairs shortest times
};

/// 4-neighbor bidirectional grid with uniform arc time; rows*cols nodes in
/// row-major order.
Network build_grid(int rows, int cols, Seconds arc_time);

}  // namespace fleetmdp
