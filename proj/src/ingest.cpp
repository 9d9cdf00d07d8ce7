#include "fleetmdp/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace fleetmdp {

double uniform01(std::mt19937_64& rng) {
  return double(rng() >> 11) * 0x1.0p-53;
}

int64_t uniform_int(std::mt19937_64& rng, int64_t lo, int64_t hi) {
  if (lo > hi) throw InternalError("uniform_int: empty range");
  uint64_t span = uint64_t(hi - lo) + 1;
  // Rejection keeps the draw unbiased and identical everywhere.
  uint64_t limit = std::numeric_limits<uint64_t>::max() -
                   std::numeric_limits<uint64_t>::max() % span;
  uint64_t v;
  do {
    v = rng();
  } while (v >= limit);
  return lo + int64_t(v % span);
}

int poisson_knuth(std::mt19937_64& rng, double lambda) {
  if (lambda < 0) throw InternalError("poisson: negative rate");
  if (lambda == 0) return 0;
  if (lambda > 30.0) {
    // Split large rates to keep the product method stable.
    int half = poisson_knuth(rng, lambda / 2.0);
    return half + poisson_knuth(rng, lambda - lambda / 2.0);
  }
  double l = std::exp(-lambda);
  int k = 0;
  double p = 1.0;
  do {
    ++k;
    p *= uniform01(rng);
  } while (p > l);
  return k - 1;
}

double fare_percentile_cap(const std::vector<RawTrip>& trips, double keep_frac) {
  if (trips.empty()) throw InputError("percentile of an empty trip set");
  if (keep_frac <= 0.0 || keep_frac > 1.0) throw InputError("bad percentile fraction");
  std::vector<double> fares;
  fares.reserve(trips.size());
  for (const auto& t : trips) fares.push_back(t.fare);
  std::sort(fares.begin(), fares.end());
  size_t rank = size_t(std::ceil(keep_frac * double(fares.size())));
  rank = std::min(std::max<size_t>(rank, 1), fares.size());
  return fares[rank - 1];
}

std::vector<RawTrip> clean_trips(const std::vector<RawTrip>& trips,
                                 const CleaningRules& rules) {
  std::vector<RawTrip> out;
  out.reserve(trips.size());
  for (const RawTrip& t : trips) {
    if (rules.weekday_only) {
      int wd = t.weekday();
      if (wd < 1 || wd > 5) continue;
    }
    bool distinct = t.ozone >= 0 ? t.ozone != t.dzone
                                 : (t.olat != t.dlat || t.olon != t.dlon);
    if (!distinct) continue;
    if (t.distance_m < rules.min_distance_m || t.distance_m > rules.max_distance_m)
      continue;
    if (t.duration <= rules.min_duration_s) continue;
    if (t.passengers <= 0) continue;
    if (t.fare < rules.min_fare) continue;
    if (rules.fare_cap && t.fare > *rules.fare_cap) continue;
    double speed = t.distance_m / double(t.duration);
    if (speed < rules.min_speed_mps || speed > rules.max_speed_mps) continue;
    out.push_back(t);
  }
  return out;
}

double haversine(double lat1, double lon1, double lat2, double lon2) {
  if (std::abs(lat1) > 90.0 || std::abs(lat2) > 90.0)
    throw InputError("latitude outside [-90, 90]");
  constexpr double kEarthRadius = 6371000.0;
  constexpr double d2r = std::numbers::pi / 180.0;
  double p1 = lat1 * d2r, p2 = lat2 * d2r;
  double dp = (lat2 - lat1) * d2r, dl = (lon2 - lon1) * d2r;
  double a = std::sin(dp / 2) * std::sin(dp / 2) +
             std::cos(p1) * std::cos(p2) * std::sin(dl / 2) * std::sin(dl / 2);
  a = std::min(1.0, std::max(0.0, a));
  return 2.0 * kEarthRadius * std::atan2(std::sqrt(a), std::sqrt(1.0 - a));
}

double fit_duration_model(const std::vector<RawTrip>& trips) {
  double num = 0.0, den = 0.0;
  for (const RawTrip& t : trips) {
    double s = haversine(t.olat, t.olon, t.dlat, t.dlon);
    num += double(t.duration) * s;
    den += s * s;
  }
  if (den <= 0.0) throw InputError("duration model needs a trip with positive distance");
  return num / den;
}

int GridSpec::cols() const {
  double width = haversine(lat_min, lon_min, lat_min, lon_max);
  return std::max(1, int(std::ceil(width / cell_width_m)));
}

int GridSpec::rows() const {
  double height = haversine(lat_min, lon_min, lat_max, lon_min);
  return std::max(1, int(std::ceil(height / cell_height_m)));
}

int discretize(double lat, double lon, const GridSpec& grid) {
  if (lat < grid.lat_min || lat > grid.lat_max || lon < grid.lon_min ||
      lon > grid.lon_max)
    throw InputError("coordinate outside the grid bounding box");
  double x = haversine(grid.lat_min, grid.lon_min, grid.lat_min, lon);
  double y = haversine(grid.lat_min, grid.lon_min, lat, grid.lon_min);
  int col = std::min(grid.cols() - 1, int(std::floor(x / grid.cell_width_m)));
  int row = std::min(grid.rows() - 1, int(std::floor(y / grid.cell_height_m)));
  return row * grid.cols() + col;
}

double SamplePath::total_fares() const {
  int64_t cents = 0;
  for (const auto& r : requests) cents += r.req.fare_cents;
  return double(cents) / 100.0;
}

const SamplePath& Instance::path(bool test, int idx) const {
  const auto& v = test ? test_paths : train_paths;
  if (idx < 0 || idx >= int(v.size())) throw InputError("sample path index out of range");
  return v[idx];
}

const std::vector<InitialVehicle>& Instance::initial(bool test, int idx) const {
  const auto& v = test ? test_initial : train_initial;
  if (idx < 0 || idx >= int(v.size())) throw InputError("initial state index out of range");
  return v[idx];
}

SampledPaths sample_demand_paths(
    const std::vector<RawTrip>& cleaned,
    const std::function<std::pair<NodeId, NodeId>(const RawTrip&)>& nodes_of,
    double fraction, int path_count, const Horizon& hz, std::mt19937_64& rng,
    const std::vector<std::pair<int64_t, int>>* taxi_counts,
    const std::set<int>& allowed_weekdays) {
  if (fraction <= 0.0 || fraction > 1.0) throw InputError("fraction must be in (0, 1]");
  if (path_count < 1) throw InputError("need at least one sample path");

  // Group by calendar day, restricted to the allowed weekdays.
  std::map<int64_t, std::vector<size_t>> by_day;
  for (size_t i = 0; i < cleaned.size(); ++i)
    if (allowed_weekdays.count(cleaned[i].weekday()))
      by_day[cleaned[i].day()].push_back(i);
  if (by_day.empty()) throw InputError("no trips on the allowed weekdays");
  std::vector<int64_t> days;
  for (auto& [d, v] : by_day) days.push_back(d);

  SampledPaths out;
  for (int p = 0; p < path_count; ++p) {
    const std::vector<size_t>* day_trips = nullptr;
    do {
      int64_t day = days[size_t(uniform_int(rng, 0, int64_t(days.size()) - 1))];
      day_trips = &by_day[day];
    } while (day_trips->empty());

    size_t want = size_t(std::ceil(fraction * double(day_trips->size())));
    std::vector<size_t> idx = *day_trips;
    for (size_t i = 0; i < want; ++i) {
      size_t j = size_t(uniform_int(rng, int64_t(i), int64_t(idx.size()) - 1));
      std::swap(idx[i], idx[j]);
    }
    idx.resize(want);

    SamplePath path;
    for (size_t i : idx) {
      const RawTrip& t = cleaned[i];
      auto [o, d] = nodes_of(t);
      if (o == d) continue;  // collapsed into one cell during discretization
      TimedRequest r;
      r.reveal = t.second_of_day();
      if (r.reveal >= hz.end_time()) continue;
      r.req = {o, d, t.passengers, r.reveal + 300, hz.end_time(),
               llround(t.fare * 100.0)};
      path.requests.push_back(r);
    }
    std::sort(path.requests.begin(), path.requests.end(),
              [](const TimedRequest& a, const TimedRequest& b) {
                return std::tie(a.reveal, a.req) < std::tie(b.reveal, b.req);
              });
    out.paths.push_back(std::move(path));
  }

  // Peak simultaneously active taxis over 15-minute windows.
  int64_t peak = 0;
  if (taxi_counts && !taxi_counts->empty()) {
    std::map<int64_t, int64_t> window_max;
    for (auto [ts, n] : *taxi_counts) {
      auto& w = window_max[ts / 900];
      w = std::max<int64_t>(w, n);
    }
    for (auto& [w, n] : window_max) peak = std::max(peak, n);
  } else {
    // Fall back to overlap counting on the trips themselves.
    std::map<int64_t, int64_t> delta;
    for (const RawTrip& t : cleaned) {
      delta[t.pickup_unix / 900] += 1;
      delta[(t.pickup_unix + t.duration) / 900 + 1] -= 1;
    }
    int64_t run = 0;
    for (auto& [w, d] : delta) {
      run += d;
      peak = std::max(peak, run);
    }
  }
  out.fleet_size = Count(std::ceil(fraction * double(peak)));
  return out;
}

Instance generate_synthetic(const SyntheticSpec& spec) {
  if (spec.vehicles < 1) throw InputError("need at least one vehicle");
  Instance inst;
  inst.name = "synthetic-" + std::to_string(spec.rows) + "x" + std::to_string(spec.cols);
  inst.network = std::make_shared<Network>(
      build_grid(spec.rows, spec.cols, spec.arc_time));
  inst.horizon = spec.horizon;
  inst.fleet_size = spec.vehicles;

  std::mt19937_64 rng(splitmix64(spec.seed));
  const NodeId n = inst.network->node_count();

  // Hot spots for origins and (a separate set for) destinations.
  auto draw_nodes = [&](int k) {
    std::set<NodeId> s;
    while (int(s.size()) < std::min<int>(k, n)) s.insert(NodeId(uniform_int(rng, 0, n - 1)));
    return s;
  };
  std::set<NodeId> hot_origin = draw_nodes(spec.hotspot_count);
  std::set<NodeId> hot_dest = draw_nodes(spec.hotspot_count);

  std::vector<double> w_origin(n, 1.0), w_dest(n, 1.0);
  for (NodeId v : hot_origin) w_origin[v] = spec.hotspot_weight;
  for (NodeId v : hot_dest) w_dest[v] = spec.hotspot_weight;
  auto draw_weighted = [&](const std::vector<double>& w) {
    double total = 0.0;
    for (double x : w) total += x;
    double u = uniform01(rng) * total;
    double acc = 0.0;
    for (NodeId v = 0; v < n; ++v) {
      acc += w[v];
      if (u < acc) return v;
    }
    return NodeId(n - 1);
  };

  // Two-peak daily rate, evaluated per epoch window.
  const int bins = spec.horizon.epochs;
  std::vector<double> rate(bins);
  double rate_sum = 0.0;
  for (int i = 0; i < bins; ++i) {
    double h = (double(i) + 0.5) * double(spec.horizon.epoch_len) / 3600.0;
    double morning = std::exp(-0.5 * std::pow((h - 8.5) / 1.8, 2));
    double evening = 1.3 * std::exp(-0.5 * std::pow((h - 18.5) / 2.5, 2));
    rate[i] = 0.25 + morning + evening;
    rate_sum += rate[i];
  }

  auto draw_heads = [&]() {
    double u = uniform01(rng);
    if (u < 0.70) return 1;
    if (u < 0.90) return 2;
    if (u < 0.97) return 3;
    return 4;
  };

  auto gen_path = [&]() {
    SamplePath path;
    for (int i = 0; i < bins; ++i) {
      double lambda = spec.requests_per_day * rate[i] / rate_sum;
      int k = poisson_knuth(rng, lambda);
      for (int q = 0; q < k; ++q) {
        NodeId o = draw_weighted(w_origin);
        NodeId d = draw_weighted(w_dest);
        int guard = 0;
        while (d == o && ++guard < 64) d = draw_weighted(w_dest);
        if (d == o) d = (o + 1) % n;
        TimedRequest r;
        r.reveal = Seconds(i) * spec.horizon.epoch_len +
                   Seconds(uniform_int(rng, 0, spec.horizon.epoch_len - 1));
        Seconds direct = inst.network->shortest_time(o, d);
        r.req = {o, d, draw_heads(), r.reveal + 300, spec.horizon.end_time(),
                 llround((spec.fare_base + spec.fare_per_second * double(direct)) * 100.0)};
        path.requests.push_back(r);
      }
    }
    std::sort(path.requests.begin(), path.requests.end(),
              [](const TimedRequest& a, const TimedRequest& b) {
                return std::tie(a.reveal, a.req) < std::tie(b.reveal, b.req);
              });
    return path;
  };

  auto gen_initial = [&]() {
    std::vector<InitialVehicle> fleet;
    for (Count v = 0; v < spec.vehicles; ++v)
      fleet.push_back({NodeId(uniform_int(rng, 0, n - 1)), uniform01(rng)});
    return fleet;
  };

  for (int p = 0; p < spec.train_paths; ++p) {
    inst.train_paths.push_back(gen_path());
    inst.train_initial.push_back(gen_initial());
  }
  for (int p = 0; p < spec.test_paths; ++p) {
    inst.test_paths.push_back(gen_path());
    inst.test_initial.push_back(gen_initial());
  }
  return inst;
}

}  // namespace fleetmdp
