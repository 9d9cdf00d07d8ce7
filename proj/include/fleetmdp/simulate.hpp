#pragma once

#include <array>
#include <optional>

#include "fleetmdp/policy.hpp"

namespace fleetmdp {

struct PolicySpec {
  enum class Kind { Myopic, PM, VFA } kind = Kind::Myopic;
  double theta = 0.1;                  // PM recharge threshold
  const ValueTables* tables = nullptr; // VFA
};

struct EpochRow {
  int epoch = 0;
  std::array<Count, 8> decision_counts{};  // indexed by DecisionKind
  double mean_range = 0.0;
  Count passengers_on_board = 0;
  Count backlog = 0;
};

struct DecisionLogEntry {
  int epoch = 0;
  VehicleAttribute attr;
  Decision decision;
  Count count = 0;
  double contribution = 0.0;
};

struct EpisodeResult {
  int path_id = 0;
  double reward = 0.0;
  double fares_available = 0.0;
  double rfr = 1.0;  // reward / fares_available; 1 for an empty path
  std::array<Count, 8> decision_counts{};
  Count revealed = 0;
  Count served = 0;
  Count lost = 0;
  std::vector<EpochRow> telemetry;
  std::vector<DecisionLogEntry> log;  // filled only when requested
};

struct EvalStats {
  double mean = 0.0;
  double median = 0.0;
  double iqr = 0.0;
  double me = 0.0;  // 1.96 * sigma / sqrt(N)
};

struct EvalResult {
  std::vector<EpisodeResult> episodes;  // ordered by path id
  EvalStats reward;
  EvalStats rfr;
};

struct EpisodeOptions {
  bool keep_log = false;
  std::string dump_state_dir;  // per-epoch state JSON when non-empty
  std::string dump_lp_path;    // first epoch's assignment problem when non-empty
};

/// Rolls one test (or training) sample path under the policy: enumerate,
/// decide, collect the reward, transition with the path's demand.
EpisodeResult run_episode(const Instance& inst, const PolicySpec& policy,
                          int path_idx, bool test_set, const PolicyContext& ctx,
                          const EpisodeOptions& opts = {});

/// Mean / median / IQR (linear-interpolation quartiles) / margin of error
/// with the sample standard deviation; N = 1 yields me = 0.
EvalStats compute_stats(std::vector<double> values);

/// Runs every test path (in parallel when jobs > 1) and aggregates.
EvalResult evaluate(const Instance& inst, const PolicySpec& policy,
                    const PolicyContext& ctx, int jobs = 1,
                    bool keep_logs = false);

}  // namespace fleetmdp
