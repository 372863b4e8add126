#pragma once

// Event-driven simulation of the parked -> assigned -> serving -> cruising -> parked cycle on a
// square lattice of stations. Used as an independent check on the analytical fleet formulas, so it
// shares no code with them.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <ostream>
#include <queue>
#include <random>
#include <string>
#include <vector>

#include "savpark/error.hpp"

namespace savpark::des {

enum class Metric { manhattan, euclidean };

struct SimConfig {
  double region_side_km = 10.0;
  double station_density_x = 1.0;
  double spaces_per_station_z = 10.0;  // rounded to the nearest integer
  double fleet_m = 100.0;              // rounded to the nearest integer
  double demand_rate = 1.0;            // veh/km^2/hr
  double speed_kmh = 20.0;
  double horizon_h = 200.0;
  double warmup_h = -1.0;  // negative: 20% of the horizon
  std::uint64_t seed = 1;
  Metric metric = Metric::manhattan;
  bool allow_c_to_a = false;
};

struct SimStats {
  double mean_wait_h = 0.0;
  double wait_p50_h = 0.0;
  double wait_p95_h = 0.0;
  double nearest_assignment_fraction = 0.0;
  double station_full_on_return_fraction = 0.0;
  double occ_a = 0.0, occ_s = 0.0, occ_c = 0.0, occ_p = 0.0;
  std::uint64_t events_processed = 0;

  // bookkeeping for property checks
  std::uint64_t arrivals = 0;
  std::uint64_t completed = 0;
  std::uint64_t in_flight_at_end = 0;
  std::uint64_t queued_at_end = 0;
  std::uint64_t waits_recorded = 0;
  std::uint64_t service_starts = 0;  // after warmup
  double mean_trip_len_km = 0.0;     // trips that started service after warmup
  double measured_h = 0.0;
  int max_station_occupancy = 0;
  int capacity_z = 0;
  int stations = 0;
  int fleet = 0;
  double realized_station_density = 0.0;
};

struct ScriptedDemand {
  double time_h = 0.0;
  double ox = 0.0, oy = 0.0;
  double dx = 0.0, dy = 0.0;
};

/// 53-bit uniform draws and exponential gaps from mt19937_64; spelled out so results do not
/// depend on the standard library's distribution implementations.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : g_(seed) {}
  double uniform() { return static_cast<double>(g_() >> 11) * 0x1.0p-53; }
  double exponential(double rate) { return -std::log1p(-uniform()) / rate; }

private:
  std::mt19937_64 g_;
};

struct Lattice {
  int n = 1;  // stations per axis
  double side = 1.0;
  double spacing = 1.0;

  Lattice(double region_side, double density) {
    n = std::max(1, static_cast<int>(std::lround(region_side * std::sqrt(density))));
    side = region_side;
    spacing = side / n;
  }
  int count() const { return n * n; }
  double cx(int s) const { return (s % n + 0.5) * spacing; }
  double cy(int s) const { return (s / n + 0.5) * spacing; }
  int cell_of(double x, double y) const {
    const int i = std::clamp(static_cast<int>(x / spacing), 0, n - 1);
    const int j = std::clamp(static_cast<int>(y / spacing), 0, n - 1);
    return j * n + i;
  }
  double density() const { return count() / (side * side); }
};

inline double distance(Metric m, double ax, double ay, double bx, double by) {
  const double dx = std::abs(ax - bx), dy = std::abs(ay - by);
  return m == Metric::manhattan ? dx + dy : std::hypot(dx, dy);
}

/// Nearest station satisfying pred, by expanding square rings around the point's cell. Any station
/// r rings out is at least (r - 0.5) spacings away along one axis. Returns -1 when none qualifies.
template <class Pred>
int nearest_station(const Lattice& lat, Metric metric, double x, double y, Pred&& pred, double* dist_out = nullptr) {
  const int ci = std::clamp(static_cast<int>(x / lat.spacing), 0, lat.n - 1);
  const int cj = std::clamp(static_cast<int>(y / lat.spacing), 0, lat.n - 1);
  int best = -1;
  double best_d = std::numeric_limits<double>::infinity();
  auto consider = [&](int i, int j) {
    if (i < 0 || j < 0 || i >= lat.n || j >= lat.n) return;
    const int s = j * lat.n + i;
    if (!pred(s)) return;
    const double d = distance(metric, x, y, lat.cx(s), lat.cy(s));
    if (d < best_d || (d == best_d && s < best)) {
      best_d = d;
      best = s;
    }
  };
  for (int r = 0; r < lat.n; ++r) {
    if (best >= 0 && (r - 0.5) * lat.spacing > best_d) break;
    if (r == 0) {
      consider(ci, cj);
      continue;
    }
    for (int k = -r; k <= r; ++k) {
      consider(ci + k, cj - r);
      consider(ci + k, cj + r);
    }
    for (int k = -r + 1; k <= r - 1; ++k) {
      consider(ci - r, cj + k);
      consider(ci + r, cj + k);
    }
  }
  if (dist_out) *dist_out = best_d;
  return best;
}

inline void check_config(const SimConfig& sc) {
  for (double v : {sc.region_side_km, sc.station_density_x, sc.spaces_per_station_z, sc.fleet_m, sc.speed_kmh,
                   sc.horizon_h})
    if (!(v > 0.0) || !std::isfinite(v)) throw DomainError("SimConfig: sizes, speed and horizon must be positive");
  if (!(sc.demand_rate >= 0.0) || !std::isfinite(sc.demand_rate))
    throw DomainError("SimConfig: demand rate must be finite and >= 0");
  if (sc.warmup_h >= sc.horizon_h) throw DomainError("SimConfig: warmup must be shorter than the horizon");
  if (std::lround(sc.spaces_per_station_z) < 1 || std::lround(sc.fleet_m) < 1)
    throw DomainError("SimConfig: need at least one space per station and one vehicle");
}

namespace detail {

enum class VState { parked, assigned, serving, cruising, waiting_space };
enum class EvType { arrival, pickup, dropoff, park };

struct Event {
  double t;
  std::uint64_t seq;
  EvType type;
  int vehicle;
  std::uint32_t epoch;
  bool operator>(const Event& o) const { return t != o.t ? t > o.t : seq > o.seq; }
};

struct Demand {
  double t_arrive, ox, oy, dx, dy;
};

struct Vehicle {
  VState state = VState::parked;
  int station = -1;  // parked at, or reserved destination while cruising
  std::uint32_t epoch = 0;
  double px = 0.0, py = 0.0;  // position at leg start
  double leg_start = 0.0;
  double tx = 0.0, ty = 0.0;  // leg target
  Demand job{};
};

class Simulator {
public:
  Simulator(const SimConfig& sc, std::ostream* trace)
      : sc_(sc), lat_(sc.region_side_km, sc.station_density_x), rng_(sc.seed), trace_(trace) {
    check_config(sc);
    z_ = static_cast<int>(std::lround(sc.spaces_per_station_z));
    const int m = static_cast<int>(std::lround(sc.fleet_m));
    warmup_ = sc.warmup_h < 0.0 ? 0.2 * sc.horizon_h : sc.warmup_h;
    parked_.assign(lat_.count(), {});
    reserved_.assign(lat_.count(), 0);
    vehicles_.resize(m);
    const long capacity = static_cast<long>(lat_.count()) * z_;
    for (int k = 0; k < m; ++k) {
      Vehicle& v = vehicles_[k];
      if (k < capacity) {
        const int s = k % lat_.count();
        v.state = VState::parked;
        v.station = s;
        v.px = lat_.cx(s);
        v.py = lat_.cy(s);
        parked_[s].push_back(k);
      } else {
        // more vehicles than spaces: the rest start on the road waiting for a space
        v.state = VState::waiting_space;
        v.px = rng_.uniform() * lat_.side;
        v.py = rng_.uniform() * lat_.side;
        waiting_return_.push_back(k);
      }
    }
    counts_[static_cast<int>(VState::parked)] = std::min<long>(m, capacity);
    counts_[static_cast<int>(VState::waiting_space)] = m - counts_[static_cast<int>(VState::parked)];
    for (int s = 0; s < lat_.count(); ++s) track_occupancy(s);
    if (trace_) *trace_ << "time,event_type,vehicle_id,station_id,x,y\n";
  }

  SimStats run_poisson() {
    const double rate = sc_.demand_rate * lat_.side * lat_.side;
    if (rate > 0.0) schedule(rng_.exponential(rate), EvType::arrival, -1, 0);
    loop(rate);
    return finish();
  }

  SimStats run_script(std::vector<ScriptedDemand> script) {
    std::stable_sort(script.begin(), script.end(),
                     [](const ScriptedDemand& a, const ScriptedDemand& b) { return a.time_h < b.time_h; });
    script_ = std::move(script);
    if (!script_.empty()) schedule(script_[0].time_h, EvType::arrival, -1, 0);
    loop(0.0);
    return finish();
  }

private:
  void schedule(double t, EvType type, int vehicle, std::uint32_t epoch) {
    events_.push({t, seq_++, type, vehicle, epoch});
  }

  void trace(double t, const char* what, int vehicle, int station, double x, double y) {
    if (!trace_) return;
    *trace_ << t << ',' << what << ',' << vehicle << ',' << station << ',' << x << ',' << y << '\n';
  }

  void advance(double t) {
    const double a = std::max(now_, warmup_), b = std::min(t, sc_.horizon_h);
    if (b > a)
      for (int k = 0; k < 5; ++k) area_[k] += counts_[k] * (b - a);
    now_ = t;
  }

  void set_state(Vehicle& v, VState s) {
    --counts_[static_cast<int>(v.state)];
    ++counts_[static_cast<int>(s)];
    v.state = s;
  }

  void track_occupancy(int s) {
    max_occ_ = std::max(max_occ_, static_cast<int>(parked_[s].size()) + reserved_[s]);
  }

  bool full(int s) const { return static_cast<int>(parked_[s].size()) + reserved_[s] >= z_; }

  void start_leg(Vehicle& v, double tx, double ty, double& travel) {
    v.leg_start = now_;
    v.tx = tx;
    v.ty = ty;
    travel = distance(sc_.metric, v.px, v.py, tx, ty) / sc_.speed_kmh;
  }

  // position of a cruising vehicle: x leg first, then y
  void current_position(const Vehicle& v, double& x, double& y) const {
    double along = (now_ - v.leg_start) * sc_.speed_kmh;
    const double lx = std::abs(v.tx - v.px);
    if (along <= lx) {
      x = v.px + std::copysign(along, v.tx - v.px);
      y = v.py;
      return;
    }
    along = std::min(along - lx, std::abs(v.ty - v.py));
    x = v.tx;
    y = v.py + std::copysign(along, v.ty - v.py);
  }

  void dispatch(int k, const Demand& d) {
    Vehicle& v = vehicles_[k];
    if (v.state == VState::parked) {
      auto& stack = parked_[v.station];
      stack.erase(std::find(stack.begin(), stack.end(), k));
      const int freed = v.station;
      v.station = -1;
      trace(now_, "dispatch", k, freed, v.px, v.py);
      release_space(freed);
    } else {
      trace(now_, "redirect", k, v.station, v.px, v.py);
    }
    v.job = d;
    ++v.epoch;
    set_state(v, VState::assigned);
    double travel;
    start_leg(v, d.ox, d.oy, travel);
    schedule(now_ + travel, EvType::pickup, k, v.epoch);
  }

  void release_space(int s) {
    while (!waiting_return_.empty() && !full(s)) {
      const int k = waiting_return_.front();
      waiting_return_.pop_front();
      send_to_station(k, s);
    }
  }

  void send_to_station(int k, int s) {
    Vehicle& v = vehicles_[k];
    ++reserved_[s];
    track_occupancy(s);
    v.station = s;
    set_state(v, VState::cruising);
    ++v.epoch;
    double travel;
    start_leg(v, lat_.cx(s), lat_.cy(s), travel);
    schedule(now_ + travel, EvType::park, k, v.epoch);
  }

  void on_arrival(double rate) {
    Demand d{};
    if (script_.empty() && rate > 0.0) {
      d = {now_, rng_.uniform() * lat_.side, rng_.uniform() * lat_.side, rng_.uniform() * lat_.side,
           rng_.uniform() * lat_.side};
      const double next = now_ + rng_.exponential(rate);
      if (next <= sc_.horizon_h) schedule(next, EvType::arrival, -1, 0);
    } else {
      const ScriptedDemand& sd = script_[script_pos_++];
      d = {now_, sd.ox, sd.oy, sd.dx, sd.dy};
      if (script_pos_ < script_.size()) schedule(script_[script_pos_].time_h, EvType::arrival, -1, 0);
    }
    ++arrivals_;
    trace(now_, "arrival", -1, -1, d.ox, d.oy);
    const bool measured = now_ >= warmup_;
    if (measured) ++arrivals_measured_;

    double ds = 0.0;
    const int s = nearest_station(lat_, sc_.metric, d.ox, d.oy, [&](int st) { return !parked_[st].empty(); }, &ds);
    int chosen = -1;
    if (s >= 0) chosen = parked_[s].back();
    if (sc_.allow_c_to_a) {
      double best = s >= 0 ? ds : std::numeric_limits<double>::infinity();
      for (int k = 0; k < static_cast<int>(vehicles_.size()); ++k) {
        const Vehicle& v = vehicles_[k];
        if (v.state != VState::cruising) continue;
        double x, y;
        current_position(v, x, y);
        const double dd = distance(sc_.metric, x, y, d.ox, d.oy);
        if (dd < best) {
          best = dd;
          chosen = k;
        }
      }
    }
    if (chosen < 0) {
      queue_.push_back(d);
      return;
    }
    if (measured && s >= 0 && s == lat_.cell_of(d.ox, d.oy) && vehicles_[chosen].state == VState::parked)
      ++nearest_hits_;
    Vehicle& v = vehicles_[chosen];
    if (v.state == VState::cruising) {
      double x, y;
      current_position(v, x, y);
      const int res = v.station;
      --reserved_[res];
      v.station = -1;
      v.px = x;
      v.py = y;
      dispatch(chosen, d);
      release_space(res);
    } else {
      dispatch(chosen, d);
    }
  }

  void on_pickup(int k) {
    Vehicle& v = vehicles_[k];
    v.px = v.job.ox;
    v.py = v.job.oy;
    trace(now_, "pickup", k, -1, v.px, v.py);
    if (v.job.t_arrive >= warmup_) waits_.push_back(static_cast<float>(now_ - v.job.t_arrive));
    set_state(v, VState::serving);
    if (now_ >= warmup_) {
      ++service_starts_;
      trip_len_sum_ += distance(sc_.metric, v.job.ox, v.job.oy, v.job.dx, v.job.dy);
    }
    ++v.epoch;
    double travel;
    start_leg(v, v.job.dx, v.job.dy, travel);
    schedule(now_ + travel, EvType::dropoff, k, v.epoch);
  }

  void on_dropoff(int k) {
    Vehicle& v = vehicles_[k];
    v.px = v.job.dx;
    v.py = v.job.dy;
    ++completed_;
    trace(now_, "dropoff", k, -1, v.px, v.py);
    if (now_ >= warmup_) {
      ++returns_measured_;
      if (full(lat_.cell_of(v.px, v.py))) ++returns_full_;
    }
    const int s = nearest_station(lat_, sc_.metric, v.px, v.py, [&](int st) { return !full(st); });
    if (s < 0) {
      set_state(v, VState::waiting_space);
      ++v.epoch;
      waiting_return_.push_back(k);
      return;
    }
    send_to_station(k, s);
  }

  void on_park(int k) {
    Vehicle& v = vehicles_[k];
    const int s = v.station;
    --reserved_[s];
    parked_[s].push_back(k);
    v.px = lat_.cx(s);
    v.py = lat_.cy(s);
    set_state(v, VState::parked);
    track_occupancy(s);
    trace(now_, "park", k, s, v.px, v.py);
    if (!queue_.empty()) {
      const Demand d = queue_.front();
      queue_.pop_front();
      dispatch(k, d);
    }
  }

  void loop(double rate) {
    while (!events_.empty()) {
      const Event e = events_.top();
      if (e.t > sc_.horizon_h) break;
      events_.pop();
      if (e.vehicle >= 0 && vehicles_[e.vehicle].epoch != e.epoch) continue;
      advance(e.t);
      ++events_processed_;
      switch (e.type) {
        case EvType::arrival: on_arrival(rate); break;
        case EvType::pickup: on_pickup(e.vehicle); break;
        case EvType::dropoff: on_dropoff(e.vehicle); break;
        case EvType::park: on_park(e.vehicle); break;
      }
    }
    advance(sc_.horizon_h);
  }

  SimStats finish() {
    SimStats st;
    const double span = sc_.horizon_h - warmup_;
    st.measured_h = span;
    st.events_processed = events_processed_;
    st.arrivals = arrivals_;
    st.completed = completed_;
    st.queued_at_end = queue_.size();
    for (const auto& v : vehicles_)
      if (v.state == VState::assigned || v.state == VState::serving) ++st.in_flight_at_end;
    st.occ_p = area_[static_cast<int>(VState::parked)] / span;
    st.occ_a = area_[static_cast<int>(VState::assigned)] / span;
    st.occ_s = area_[static_cast<int>(VState::serving)] / span;
    st.occ_c = (area_[static_cast<int>(VState::cruising)] + area_[static_cast<int>(VState::waiting_space)]) / span;
    st.waits_recorded = waits_.size();
    if (!waits_.empty()) {
      double sum = 0.0;
      for (float w : waits_) sum += w;
      st.mean_wait_h = sum / waits_.size();
      st.wait_p50_h = quantile(0.50);
      st.wait_p95_h = quantile(0.95);
    }
    st.nearest_assignment_fraction = arrivals_measured_ ? static_cast<double>(nearest_hits_) / arrivals_measured_ : 0.0;
    st.station_full_on_return_fraction =
        returns_measured_ ? static_cast<double>(returns_full_) / returns_measured_ : 0.0;
    st.service_starts = service_starts_;
    st.mean_trip_len_km = service_starts_ ? trip_len_sum_ / service_starts_ : 0.0;
    st.max_station_occupancy = max_occ_;
    st.capacity_z = z_;
    st.stations = lat_.count();
    st.fleet = static_cast<int>(vehicles_.size());
    st.realized_station_density = lat_.density();
    return st;
  }

  double quantile(double q) {
    const std::size_t idx = std::min(waits_.size() - 1, static_cast<std::size_t>(q * (waits_.size() - 1) + 0.5));
    std::nth_element(waits_.begin(), waits_.begin() + static_cast<std::ptrdiff_t>(idx), waits_.end());
    return waits_[idx];
  }

  SimConfig sc_;
  Lattice lat_;
  Rng rng_;
  std::ostream* trace_;
  int z_ = 0;
  double warmup_ = 0.0;
  double now_ = 0.0;
  std::uint64_t seq_ = 0;
  std::priority_queue<Event, std::vector<Event>, std::greater<Event>> events_;
  std::vector<Vehicle> vehicles_;
  std::vector<std::vector<int>> parked_;
  std::vector<int> reserved_;
  std::deque<Demand> queue_;
  std::deque<int> waiting_return_;
  std::vector<ScriptedDemand> script_;
  std::size_t script_pos_ = 0;
  long counts_[5] = {0, 0, 0, 0, 0};
  double area_[5] = {0, 0, 0, 0, 0};
  std::vector<float> waits_;
  std::uint64_t events_processed_ = 0, arrivals_ = 0, arrivals_measured_ = 0, completed_ = 0;
  std::uint64_t nearest_hits_ = 0, returns_measured_ = 0, returns_full_ = 0, service_starts_ = 0;
  double trip_len_sum_ = 0.0;
  int max_occ_ = 0;
};

}  // namespace detail

inline SimStats run_simulation(const SimConfig& sc, std::ostream* trace = nullptr) {
  detail::Simulator sim(sc, trace);
  return sim.run_poisson();
}

/// Same machinery driven by a fixed list of demands instead of Poisson arrivals.
inline SimStats run_simulation(const SimConfig& sc, const std::vector<ScriptedDemand>& script,
                               std::ostream* trace = nullptr) {
  detail::Simulator sim(sc, trace);
  return sim.run_script(script);
}

struct KappaEstimate {
  double kappa = 0.0;
  double std_error = 0.0;
};

/// Monte Carlo estimate of E[distance to nearest station] * sqrt(x) for uniform points.
inline KappaEstimate empirical_kappa(const SimConfig& sc, std::size_t samples) {
  check_config(sc);
  if (samples < 2) throw DomainError("empirical_kappa: need at least two samples");
  const Lattice lat(sc.region_side_km, sc.station_density_x);
  Rng rng(sc.seed);
  double sum = 0.0, sum_sq = 0.0;
  for (std::size_t k = 0; k < samples; ++k) {
    const double x = rng.uniform() * lat.side, y = rng.uniform() * lat.side;
    double d = 0.0;
    nearest_station(lat, sc.metric, x, y, [](int) { return true; }, &d);
    sum += d;
    sum_sq += d * d;
  }
  const double n = static_cast<double>(samples);
  const double mean = sum / n;
  const double var = std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0));
  const double root_x = std::sqrt(lat.density());
  return {mean * root_x, std::sqrt(var / n) * root_x};
}

}  // namespace savpark::des
