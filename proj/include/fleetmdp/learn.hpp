#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "fleetmdp/domain.hpp"
#include "fleetmdp/ingest.hpp"

namespace fleetmdp {

struct AggregationSpec {
  int range_bins = 9;
  Seconds time_bin_len = 300;
  int time_bins = 288;

  bool operator==(const AggregationSpec&) const = default;
};

/// Aggregated lookup key: locations stay exact, range falls into equidistant
/// bins, capacity into empty / not-empty, actionable time into fixed bins.
struct AggKey {
  NodeId loc = 0;
  NodeId dest = 0;
  int range_bin = 0;
  int cap_level = 0;  // 1 when all seats are free
  int time_bin = 0;

  auto operator<=>(const AggKey&) const = default;
};

/// Marginal resource values on aggregated vehicle attributes plus the
/// analytic demand-value rule (a retained fraction of the fare while the
/// request can still be answered). Values are kept monotone: more range and
/// more free seats never lower the value, a later actionable time never
/// raises it.
class ValueTables {
 public:
  ValueTables() = default;
  ValueTables(AggregationSpec agg, const FleetParams& fleet,
              double demand_value_coeff = 0.9, bool demand_table_mode = false);

  const AggregationSpec& aggregation() const { return agg_; }
  FleetType fleet_type() const { return fleet_type_; }
  Seconds max_range() const { return max_range_; }
  double demand_value_coeff() const { return demand_coeff_; }
  bool demand_table_mode() const { return demand_table_; }

  AggKey key_of(const VehicleAttribute& a) const;
  double value(const AggKey& k) const;
  double value(const VehicleAttribute& a) const { return value(key_of(a)); }

  /// Convex smoothing step toward an estimate; does not project.
  void smooth(const AggKey& k, double estimate, double alpha);

  /// Restores the partial-order invariant around one just-updated key:
  /// comparable larger keys are raised to its value, smaller ones lowered.
  void project_monotone(const AggKey& k);

  bool is_monotone() const;
  size_t violation_count() const;
  size_t stored_cells() const;
  /// Nonzero cells in deterministic key order.
  std::vector<std::pair<AggKey, double>> entries() const;

  /// Value retained by one unserved request copy in the post-decision state
  /// of epoch t: 0 once the response deadline passes, otherwise the rule
  /// coeff * fare, or the learned entry in table mode.
  double demand_value(const RequestAttribute& b, int t, const Horizon& hz) const;
  void smooth_demand(int t, const RequestAttribute& b, double estimate, double alpha);

  std::string to_json(uint64_t instance_hash) const;
  static ValueTables from_json(const std::string& text, uint64_t* instance_hash = nullptr);
  uint64_t content_hash() const;

 private:
  int cells_per_pair() const { return agg_.range_bins * 2 * agg_.time_bins; }
  int cell_index(const AggKey& k) const {
    return (k.range_bin * 2 + k.cap_level) * agg_.time_bins + k.time_bin;
  }

  AggregationSpec agg_;
  FleetType fleet_type_ = FleetType::ICE;
  Seconds max_range_ = 1;
  int capacity_ = 4;
  double demand_coeff_ = 0.9;
  bool demand_table_ = false;
  std::map<std::pair<NodeId, NodeId>, std::vector<double>> table_;
  std::map<std::pair<int, RequestAttribute>, double> demand_table_values_;
};

/// Generalized harmonic step size a / (a + n - 1); equals 1 at n = 1.
double learning_rate(int n, double a = 300.0);

/// One smoothing pass: estimates applied in deterministic key order, each
/// immediately followed by a monotonicity projection.
void update_tables(ValueTables& tables,
                   const std::map<VehicleAttribute, double>& resource_estimates,
                   const std::map<std::pair<int, RequestAttribute>, double>&
                       demand_estimates,
                   double alpha);

struct TrainConfig {
  int iterations = 3000;
  double learning_rate_a = 300.0;
  uint64_t seed = 1;
  bool pooling = false;
  int checkpoint_every = 100;
  std::string checkpoint_dir;  // empty: no checkpoints
  AggregationSpec agg;
  double demand_value_coeff = 0.9;
  bool demand_table_mode = false;
  CostParams cost;
};

struct TrainResult {
  ValueTables tables;
  std::vector<double> curve;  // surrogate episode reward per iteration
};

/// Forward ADP: per iteration, roll one training sample path with the LP
/// surrogate, smoothing dual estimates into the tables after every epoch.
TrainResult train(const Instance& inst, const FleetParams& fleet,
                  const TrainConfig& cfg, uint64_t instance_hash = 0);

}  // namespace fleetmdp
