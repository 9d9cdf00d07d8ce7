#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "fleetmdp/domain.hpp"
#include "fleetmdp/network.hpp"

namespace fleetmdp {

/// One trip record as read from a CSV; either coordinate fields or zone ids
/// are populated depending on the input format.
struct RawTrip {
  int64_t pickup_unix = 0;  // seconds since 1970-01-01 (UTC)
  double olat = 0, olon = 0, dlat = 0, dlon = 0;
  int ozone = -1, dzone = -1;
  int passengers = 0;
  double fare = 0.0;
  Seconds duration = 0;
  double distance_m = 0.0;

  int64_t day() const { return pickup_unix / 86400; }
  Seconds second_of_day() const { return pickup_unix % 86400; }
  // 0 = Sunday .. 6 = Saturday.
  int weekday() const { return int((day() + 4) % 7); }
};

/// Pointwise record filters. The fare cap is an absolute value; resolve a
/// percentile into it first (see fare_percentile_cap) so that cleaning the
/// output again changes nothing.
struct CleaningRules {
  bool weekday_only = true;  // Monday..Friday
  double min_distance_m = 16.09;
  double max_distance_m = 80000.0;
  Seconds min_duration_s = 60;  // strictly greater than
  double min_fare = 2.50;
  std::optional<double> fare_cap;
  double min_speed_mps = 7000.0 / 3600.0;   // jammed-downtown average
  double max_speed_mps = 80467.0 / 3600.0;  // highest posted limit
};

/// Fare value at the nearest-rank `keep_frac` percentile; trips with larger
/// fares are the ones a subsequent clean_trips drops.
double fare_percentile_cap(const std::vector<RawTrip>& trips, double keep_frac = 0.95);

std::vector<RawTrip> clean_trips(const std::vector<RawTrip>& trips,
                                 const CleaningRules& rules);

/// Great-circle distance in meters, Earth radius 6,371,000 m.
double haversine(double lat1, double lon1, double lat2, double lon2);

/// Least-squares through-origin slope of duration (s) on haversine distance
/// (m) between trip endpoints: beta = sum(t*s) / sum(s^2).
double fit_duration_model(const std::vector<RawTrip>& trips);

/// Equal-size rectangle grid over a lat/lon bounding box; cell ids row-major
/// from the south-west corner.
struct GridSpec {
  double lat_min = 0, lon_min = 0, lat_max = 0, lon_max = 0;
  double cell_width_m = 215.0;
  double cell_height_m = 280.0;

  int cols() const;
  int rows() const;
};

int discretize(double lat, double lon, const GridSpec& grid);

struct TimedRequest {
  Seconds reveal = 0;  // second of day the request becomes known
  RequestAttribute req;
};

struct SamplePath {
  std::vector<TimedRequest> requests;  // sorted by reveal

  double total_fares() const;
};

struct InitialVehicle {
  NodeId loc = 0;
  double range_frac = 0.0;  // of the fleet's max range
};

/// A benchmark instance: the network, fleet size, horizon, demand sample
/// paths and one initial fleet state per path.
struct Instance {
  std::string name;
  std::shared_ptr<const Network> network;
  Horizon horizon;
  Count fleet_size = 0;
  std::vector<SamplePath> train_paths;
  std::vector<SamplePath> test_paths;
  std::vector<std::vector<InitialVehicle>> train_initial;  // parallel to paths
  std::vector<std::vector<InitialVehicle>> test_initial;

  const SamplePath& path(bool test, int idx) const;
  const std::vector<InitialVehicle>& initial(bool test, int idx) const;
};

struct SampledPaths {
  std::vector<SamplePath> paths;
  Count fleet_size = 0;
};

/// Demand sampling: pick an allowed day uniformly per path, keep a uniform
/// `fraction` of its trips, stamp response deadlines five minutes after
/// reveal and pickups by end of horizon. Fleet size is `fraction` times the
/// peak count of simultaneously active taxis (max over 15-minute windows).
SampledPaths sample_demand_paths(
    const std::vector<RawTrip>& cleaned,
    const std::function<std::pair<NodeId, NodeId>(const RawTrip&)>& nodes_of,
    double fraction, int path_count, const Horizon& hz, std::mt19937_64& rng,
    const std::vector<std::pair<int64_t, int>>* taxi_counts = nullptr,
    const std::set<int>& allowed_weekdays = {2, 4, 5});

struct SyntheticSpec {
  int rows = 5, cols = 5;
  Seconds arc_time = 360;
  Count vehicles = 20;
  double requests_per_day = 480.0;
  int train_paths = 200;
  int test_paths = 30;
  Horizon horizon;
  int hotspot_count = 3;
  double hotspot_weight = 8.0;
  double fare_base = 2.50;
  double fare_per_second = 0.005;
  uint64_t seed = 7;
};

/// Grid network plus Poisson demand with hot-spot origin/destination weights
/// and a two-peak daily rate profile. Fully determined by the seed.
Instance generate_synthetic(const SyntheticSpec& spec);

/// Uniform helpers driven by a pinned RNG so results are identical across
/// platforms and runs.
double uniform01(std::mt19937_64& rng);
int64_t uniform_int(std::mt19937_64& rng, int64_t lo, int64_t hi);  // inclusive
int poisson_knuth(std::mt19937_64& rng, double lambda);

}  // namespace fleetmdp
