#pragma once

// Rendering of plans and sweeps as csv, json or an aligned text table with deltas against a
// current-system baseline.

#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "savpark/des.hpp"
#include "savpark/error.hpp"
#include "savpark/io.hpp"
#include "savpark/sappm.hpp"
#include "savpark/sweep.hpp"
#include "savpark/tappm.hpp"

namespace savpark::report {

enum class Format { csv, json, table };

inline Format parse_format(const std::string& s) {
  if (s == "csv") return Format::csv;
  if (s == "json") return Format::json;
  if (s == "table") return Format::table;
  throw DomainError("unknown format '" + s + "' (expected csv, json or table)");
}

inline const char* csv_header() {
  return "axis1,axis2,cost_usd_per_day,TA_min,m_veh,x_per_km2,y_per_km2,z_per_station,binding";
}

inline std::string sig6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

inline std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

/// (optimal - current) / current in percent; empty when the baseline is zero or missing.
inline std::optional<double> percent_delta(double optimal, std::optional<double> current) {
  if (!current || *current == 0.0 || !std::isfinite(*current) || !std::isfinite(optimal)) return std::nullopt;
  return (optimal - *current) / *current * 100.0;
}

inline std::string format_delta(std::optional<double> d) {
  if (!d) return "n/a";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%+.2f%%", *d);
  return buf;
}

struct Row {
  std::string name;
  std::string unit;
  double value = 0.0;
  int decimals = 2;
};

/// Rows of the result-summary table; fleet sizes are rounded up here and nowhere else.
inline std::vector<Row> plan_rows(const SingleZonePlan& p) {
  return {{"x", "stations/km2", p.x_star, 2},
          {"y", "spaces/km2", p.y_star, 2},
          {"z", "spaces/station", p.z_star, 2},
          {"m", "veh", std::ceil(p.m_star), 0},
          {"yR/m", "spaces/veh", p.y_star * p.area / p.m_star, 4}};
}

inline std::vector<Row> plan_rows(const ScenarioConfig& cfg, const TwoZonePlan& p) {
  std::vector<Row> rows;
  const char* names[] = {"x", "y", "z"};
  const char* units[] = {"stations/km2", "spaces/km2", "spaces/station"};
  const std::array<double, 2>* vals[] = {&p.x, &p.y, &p.z};
  for (int k = 0; k < 3; ++k)
    for (std::size_t i = 0; i < 2; ++i)
      rows.push_back({std::string(names[k]) + "." + cfg.zones[i].id, units[k], (*vals[k])[i], 2});
  for (std::size_t i = 0; i < 2; ++i) rows.push_back({"m." + cfg.zones[i].id, "veh", std::ceil(p.m[i]), 0});
  rows.push_back({"M", "veh", std::ceil(p.m[0]) + std::ceil(p.m[1]), 0});
  return rows;
}

inline std::optional<double> lookup(const io::Baseline* b, const std::string& key) {
  if (!b) return std::nullopt;
  auto it = b->find(key);
  if (it == b->end()) return std::nullopt;
  return it->second;
}

inline std::string render_table(const std::vector<Row>& rows, const io::Baseline* baseline,
                                const std::vector<std::pair<std::string, std::string>>& extra) {
  std::ostringstream os;
  char line[160];
  std::snprintf(line, sizeof line, "%-14s %-16s %14s %14s %12s\n", "variable", "unit", "current", "optimal", "delta");
  os << line;
  for (const Row& r : rows) {
    const auto cur = lookup(baseline, r.name);
    const std::string cur_s = cur ? fixed(*cur, r.decimals) : "-";
    const std::string delta = "(" + format_delta(percent_delta(r.value, cur)) + ")";
    std::snprintf(line, sizeof line, "%-14s %-16s %14s %14s %12s\n", r.name.c_str(), r.unit.c_str(), cur_s.c_str(),
                  fixed(r.value, r.decimals).c_str(), delta.c_str());
    os << line;
  }
  for (const auto& [k, v] : extra) os << k << ": " << v << "\n";
  return os.str();
}

inline std::string csv_row(const SweepRecord& r) {
  std::string s = sig6(r.axis1) + "," + (std::isnan(r.axis2) ? std::string() : sig6(r.axis2)) + ",";
  if (!r.ok) return s + "error:" + r.error + ",,,,,,";
  return s + sig6(r.cost) + "," + sig6(r.ta_min) + "," + sig6(std::ceil(r.m)) + "," + sig6(r.x) + "," + sig6(r.y) +
         "," + sig6(r.z) + "," + (r.binding ? "1" : "0");
}

inline nlohmann::json breakdown_json(const FleetStateBreakdown& b) {
  return {{"n_A", b.n_a}, {"n_S", b.n_s}, {"n_C", b.n_c}, {"n_P", b.n_p}, {"n_R", b.n_r}, {"m_req", b.m_req()}};
}

inline std::string render_plan(const SingleZonePlan& p, Format f, const io::Baseline* baseline = nullptr) {
  if (f == Format::csv) {
    SweepRecord r;
    r.ok = true;
    r.axis2 = std::nan("");
    r.cost = p.cost_total;
    r.ta_min = p.ta_star * 60.0;
    r.m = p.m_star;
    r.x = p.x_star;
    r.y = p.y_star;
    r.z = p.z_star;
    r.binding = p.constraint_binding;
    std::string row = csv_row(r);
    row.replace(0, row.find(','), "");  // no swept axis for a single plan
    return std::string(csv_header()) + "\n" + row + "\n";
  }
  if (f == Format::json) {
    nlohmann::json j;
    j["T1A_unconstrained_h"] = p.t1a_unconstrained;
    j["T1A_star_h"] = p.t1a_star;
    j["TA_star_h"] = p.ta_star;
    j["x_star"] = p.x_star;
    j["y_star"] = p.y_star;
    j["z_star"] = p.z_star;
    j["m_star"] = p.m_star;
    j["cost_total"] = p.cost_total;
    j["cost_breakdown"] = {{"stations", p.cost.stations}, {"spaces", p.cost.spaces}, {"fleet", p.cost.fleet}};
    j["constraint_binding"] = p.constraint_binding;
    j["factor_mode"] = to_string(p.factor_mode);
    j["coefficients"] = {{"P0", p.coefficients.p0}, {"Pm2", p.coefficients.pm2}, {"Pm1", p.coefficients.pm1},
                         {"P1", p.coefficients.p1}};
    j["breakdown_at_tmax"] = breakdown_json(p.breakdown_at_tmax);
    j["breakdown_at_tmin"] = breakdown_json(p.breakdown_at_tmin);
    j["warnings"] = p.warnings;
    return j.dump(2) + "\n";
  }
  return render_table(plan_rows(p), baseline,
                      {{"cost_usd_per_day", fixed(p.cost_total, 2)},
                       {"T_A_min", fixed(p.ta_star * 60.0, 4)},
                       {"constraint_binding", p.constraint_binding ? "yes" : "no"}});
}

inline std::string render_plan(const ScenarioConfig& cfg, const TwoZonePlan& p, Format f,
                               const io::Baseline* baseline = nullptr) {
  if (f == Format::csv) {
    std::ostringstream os;
    // one row per zone, axis1 = zone number (1 or 2) in scenario order
    os << csv_header() << '\n';
    for (std::size_t i = 0; i < 2; ++i)
      os << i + 1 << ",," << sig6(cfg.costs.c_x * p.x[i] * cfg.zones[i].area_km2 + p.cost_spaces[i] +
                                           cfg.costs.c_m * p.m[i])
         << ',' << sig6(p.ta[i] * 60.0) << ',' << sig6(std::ceil(p.m[i])) << ',' << sig6(p.x[i]) << ','
         << sig6(p.y[i]) << ',' << sig6(p.z[i]) << ',' << (p.at_upper_bound[i] ? 1 : 0) << '\n';
    return os.str();
  }
  if (f == Format::json) {
    nlohmann::json j;
    j["cost_total"] = p.cost_total;
    j["cost_breakdown"] = {{"stations", p.cost_stations},
                           {"spaces", {p.cost_spaces[0], p.cost_spaces[1]}},
                           {"fleet", p.cost_fleet}};
    j["M"] = p.m_total;
    for (std::size_t i = 0; i < 2; ++i) {
      nlohmann::json z;
      z["id"] = cfg.zones[i].id;
      z["T1A_h"] = p.t1a[i];
      z["TA_h"] = p.ta[i];
      z["x"] = p.x[i];
      z["y"] = p.y[i];
      z["z"] = p.z[i];
      z["m"] = p.m[i];
      z["t_max"] = cfg.windows[p.t_max[i]].id;
      z["t_min"] = cfg.windows[p.t_min[i]].id;
      z["at_upper_bound"] = p.at_upper_bound[i];
      nlohmann::json per = nlohmann::json::object();
      for (std::size_t w = 0; w < cfg.windows.size(); ++w) per[cfg.windows[w].id] = breakdown_json(p.by_window[i][w]);
      z["by_window"] = per;
      j["zones"].push_back(z);
    }
    nlohmann::json rel = nlohmann::json::object();
    for (std::size_t w = 0; w < p.relocation.size(); ++w) {
      const auto& r = p.relocation[w];
      rel[cfg.windows[w].id] = {{"from", r.from < 0 ? "" : cfg.zones[r.from].id},
                                {"to", r.to < 0 ? "" : cfg.zones[r.to].id},
                                {"rate_veh_per_h", r.rate},
                                {"n_R", {r.n_r[0], r.n_r[1]}}};
    }
    j["relocation"] = rel;
    j["factor_mode"] = to_string(p.factor_mode);
    return j.dump(2) + "\n";
  }
  return render_table(plan_rows(cfg, p), baseline,
                      {{"cost_usd_per_day", fixed(p.cost_total, 2)},
                       {"T_A_min." + cfg.zones[0].id, fixed(p.ta[0] * 60.0, 4)},
                       {"T_A_min." + cfg.zones[1].id, fixed(p.ta[1] * 60.0, 4)}});
}

inline std::string render_sweep(const SweepResult& res, Format f) {
  if (f == Format::json) {
    nlohmann::json j;
    j["axes"] = res.axis_names;
    j["shape"] = res.shape;
    j["records"] = nlohmann::json::array();
    for (const auto& r : res.records) {
      nlohmann::json o;
      o["axis1"] = r.axis1;
      if (!std::isnan(r.axis2)) o["axis2"] = r.axis2;
      if (!r.ok) {
        o["error"] = r.error;
      } else {
        o["cost_usd_per_day"] = r.cost;
        o["TA_min"] = r.ta_min;
        o["m_veh"] = r.m;
        o["x_per_km2"] = r.x;
        o["y_per_km2"] = r.y;
        o["z_per_station"] = r.z;
        o["binding"] = r.binding;
      }
      j["records"].push_back(o);
    }
    return j.dump(2) + "\n";
  }
  if (f == Format::table) {
    std::ostringstream os;
    char line[200];
    std::snprintf(line, sizeof line, "%12s %12s %14s %10s %12s %10s %10s %10s %8s\n",
                  res.axis_names.size() > 0 ? res.axis_names[0].c_str() : "axis1",
                  res.axis_names.size() > 1 ? res.axis_names[1].c_str() : "-", "cost", "TA_min", "m", "x", "y", "z",
                  "binding");
    os << line;
    for (const auto& r : res.records) {
      if (!r.ok) {
        std::snprintf(line, sizeof line, "%12s %12s %s\n", sig6(r.axis1).c_str(),
                      std::isnan(r.axis2) ? "-" : sig6(r.axis2).c_str(), ("error:" + r.error).c_str());
      } else {
        std::snprintf(line, sizeof line, "%12s %12s %14s %10s %12s %10s %10s %10s %8s\n", sig6(r.axis1).c_str(),
                      std::isnan(r.axis2) ? "-" : sig6(r.axis2).c_str(), sig6(r.cost).c_str(),
                      sig6(r.ta_min).c_str(), sig6(std::ceil(r.m)).c_str(), sig6(r.x).c_str(), sig6(r.y).c_str(),
                      sig6(r.z).c_str(), r.binding ? "yes" : "no");
      }
      os << line;
    }
    return os.str();
  }
  std::string out = csv_header();
  out += "\n";
  for (const auto& r : res.records) out += csv_row(r) + "\n";
  return out;
}

/// Inverse of the csv rendering. Values come back at 6 significant digits; axis names are not in the csv.
inline SweepResult parse_sweep_csv(const std::string& text) {
  SweepResult res;
  std::istringstream is(text);
  std::string line;
  bool header_seen = false;
  std::vector<double> a1, a2;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.front() == '#') continue;
    if (!header_seen) {
      if (line != csv_header()) throw IoError("unexpected csv header: " + line);
      header_seen = true;
      continue;
    }
    std::vector<std::string> f;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) f.push_back(cell);
    while (f.size() < 9) f.emplace_back();
    if (f.size() != 9) throw IoError("csv row has " + std::to_string(f.size()) + " fields: " + line);
    SweepRecord r;
    r.axis1 = io::parse_number(f[0]);
    r.axis2 = f[1].empty() ? std::nan("") : io::parse_number(f[1]);
    if (f[2].rfind("error:", 0) == 0) {
      r.ok = false;
      r.error = f[2].substr(6);
    } else {
      r.ok = true;
      r.cost = io::parse_number(f[2]);
      r.ta_min = io::parse_number(f[3]);
      r.m = io::parse_number(f[4]);
      r.x = io::parse_number(f[5]);
      r.y = io::parse_number(f[6]);
      r.z = io::parse_number(f[7]);
      r.binding = f[8] == "1";
    }
    if (std::find(a1.begin(), a1.end(), r.axis1) == a1.end()) a1.push_back(r.axis1);
    if (!std::isnan(r.axis2) && std::find(a2.begin(), a2.end(), r.axis2) == a2.end()) a2.push_back(r.axis2);
    res.records.push_back(r);
  }
  if (!header_seen) throw IoError("csv has no header");
  res.shape.push_back(a1.size());
  if (!a2.empty()) res.shape.push_back(a2.size());
  return res;
}

inline std::string render_sim_stats(const des::SimStats& s) {
  nlohmann::json j;
  j["mean_wait_h"] = s.mean_wait_h;
  j["wait_quantiles_h"] = {{"p50", s.wait_p50_h}, {"p95", s.wait_p95_h}};
  j["nearest_assignment_fraction"] = s.nearest_assignment_fraction;
  j["station_full_on_return_fraction"] = s.station_full_on_return_fraction;
  j["occupancy"] = {{"n_A", s.occ_a}, {"n_S", s.occ_s}, {"n_C", s.occ_c}, {"n_P", s.occ_p}};
  j["events_processed"] = s.events_processed;
  j["arrivals"] = s.arrivals;
  j["completed"] = s.completed;
  j["in_flight_at_end"] = s.in_flight_at_end;
  j["queued_at_end"] = s.queued_at_end;
  j["service_starts_measured"] = s.service_starts;
  j["mean_trip_len_km"] = s.mean_trip_len_km;
  j["measured_h"] = s.measured_h;
  j["max_station_occupancy"] = s.max_station_occupancy;
  j["spaces_per_station"] = s.capacity_z;
  j["stations"] = s.stations;
  j["fleet"] = s.fleet;
  j["realized_station_density"] = s.realized_station_density;
  return j.dump(2) + "\n";
}

}  // namespace savpark::report
