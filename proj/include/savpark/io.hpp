#pragma once

// Plain-text inputs. All files share one syntax: `[section]` headers, `key = value` lines and `#`
// comments; the scenario's [demand] block holds whitespace-separated rows instead.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "savpark/des.hpp"
#include "savpark/error.hpp"
#include "savpark/scenario.hpp"

namespace savpark::io {

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream is(s);
  std::vector<std::string> out;
  for (std::string tok; is >> tok;) out.push_back(tok);
  return out;
}

inline std::string where(const std::string& src, int line) { return src + ":" + std::to_string(line) + ": "; }

}  // namespace detail

/// Decimal number, optionally written as a ratio `a/b` (handy for T0 = 1/60).
inline double parse_number(const std::string& text, const std::string& context = "") {
  const std::string s = detail::trim(text);
  auto one = [&](std::string_view part) {
    double v = 0.0;
    const auto* b = part.data();
    const auto* e = part.data() + part.size();
    auto [ptr, ec] = std::from_chars(b, e, v);
    if (ec != std::errc() || ptr != e || part.empty()) throw IoError(context + "not a number: '" + s + "'");
    return v;
  };
  const auto slash = s.find('/');
  if (slash == std::string::npos) return one(s);
  const double den = one(detail::trim(std::string_view(s).substr(slash + 1)));
  if (den == 0.0) throw IoError(context + "zero denominator in '" + s + "'");
  return one(detail::trim(std::string_view(s).substr(0, slash))) / den;
}

struct Line {
  int number = 0;
  std::string key;    // empty for raw rows
  std::string value;  // or the full raw row
};

struct Section {
  std::string name;
  int line = 0;
  std::vector<Line> lines;
};

struct Document {
  std::string source;
  std::vector<Section> sections;
};

/// Sections whose names are listed in raw_sections keep their rows unsplit.
inline Document parse_document(std::istream& in, const std::string& source,
                               const std::vector<std::string>& raw_sections = {}) {
  Document doc;
  doc.source = source;
  std::string raw;
  int n = 0;
  while (std::getline(in, raw)) {
    ++n;
    const auto hash = raw.find('#');
    const std::string line = detail::trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw IoError(detail::where(source, n) + "unterminated section header");
      doc.sections.push_back({detail::trim(line.substr(1, line.size() - 2)), n, {}});
      continue;
    }
    if (doc.sections.empty()) throw IoError(detail::where(source, n) + "content before the first section");
    Section& sec = doc.sections.back();
    if (std::find(raw_sections.begin(), raw_sections.end(), sec.name) != raw_sections.end()) {
      sec.lines.push_back({n, "", line});
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw IoError(detail::where(source, n) + "expected key = value");
    const std::string key = detail::trim(line.substr(0, eq));
    if (key.empty()) throw IoError(detail::where(source, n) + "empty key");
    sec.lines.push_back({n, key, detail::trim(line.substr(eq + 1))});
  }
  return doc;
}

inline std::ifstream open_input(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open '" + path + "'");
  return f;
}

// ---------------------------------------------------------------- scenario

inline ScenarioConfig parse_scenario(std::istream& in, const std::string& source = "<scenario>") {
  const Document doc = parse_document(in, source, {"demand"});
  ScenarioConfig cfg;
  struct Row {
    std::string window, origin, dest;
    double lambda;
    int line;
  };
  std::vector<Row> rows;
  std::vector<std::tuple<std::string, std::string, double, int>> pair_speeds;
  std::optional<double> uniform_inter_speed;

  for (const Section& sec : doc.sections) {
    auto num = [&](const Line& l) { return parse_number(l.value, detail::where(source, l.number)); };
    auto bad_key = [&](const Line& l) {
      return IoError(detail::where(source, l.number) + "unknown key '" + l.key + "' in [" + sec.name + "]");
    };
    if (sec.name.rfind("zone.", 0) == 0) {
      ZoneSpec z;
      z.id = sec.name.substr(5);
      for (const Line& l : sec.lines) {
        if (l.key == "area") z.area_km2 = num(l);
        else if (l.key == "trip_length") {
          if (l.value == "approx") z.trip_length_source = TripLengthSource::approximated;
          else z.trip_length_km = num(l);
        } else if (l.key == "v_min") z.v_min = num(l);
        else if (l.key == "v_max") z.v_max = num(l);
        else if (l.key == "land_cost") z.land_cost_cy = num(l);
        else throw bad_key(l);
      }
      cfg.zones.push_back(z);
    } else if (sec.name.rfind("window.", 0) == 0) {
      TimeWindow w;
      w.id = sec.name.substr(7);
      for (const Line& l : sec.lines) {
        if (l.key == "start") w.start_hour = num(l);
        else if (l.key == "length") w.length_h = num(l);
        else if (l.key == "speed") {
          if (l.value == "min") w.speed = SpeedLevel::min;
          else if (l.value == "max") w.speed = SpeedLevel::max;
          else throw IoError(detail::where(source, l.number) + "speed must be 'min' or 'max'");
        } else throw bad_key(l);
      }
      cfg.windows.push_back(w);
    } else if (sec.name == "demand") {
      for (const Line& l : sec.lines) {
        const auto tok = detail::split_ws(l.value);
        if (tok.size() != 4)
          throw IoError(detail::where(source, l.number) + "demand row needs: window origin dest lambda");
        rows.push_back({tok[0], tok[1], tok[2], parse_number(tok[3], detail::where(source, l.number)), l.number});
      }
    } else if (sec.name == "params") {
      ModelParams& p = cfg.params;
      for (const Line& l : sec.lines) {
        if (l.key == "p") p.p = num(l);
        else if (l.key == "q") p.q = num(l);
        else if (l.key == "alpha") p.alpha = num(l);
        else if (l.key == "I") p.mean_to_variance = num(l);
        else if (l.key == "kappa") p.kappa = num(l);
        else if (l.key == "T0_h") p.t0_h = num(l);
        else if (l.key == "T0_min") p.t0_h = num(l) / 60.0;
        else if (l.key == "H") p.rebalance_interval_h = num(l);
        else if (l.key == "centroid_distance") p.centroid_distance_km = num(l);
        else if (l.key == "inter_zone_speed") uniform_inter_speed = num(l);
        else if (l.key.rfind("inter_zone_speed.", 0) == 0) {
          const std::string rest = l.key.substr(17);
          const auto dot = rest.find('.');
          if (dot == std::string::npos)
            throw IoError(detail::where(source, l.number) + "expected inter_zone_speed.<from>.<to>");
          pair_speeds.emplace_back(rest.substr(0, dot), rest.substr(dot + 1), num(l), l.number);
        } else throw bad_key(l);
      }
    } else if (sec.name == "costs") {
      for (const Line& l : sec.lines) {
        if (l.key == "C_x") cfg.costs.c_x = num(l);
        else if (l.key == "C_m") cfg.costs.c_m = num(l);
        else throw bad_key(l);
      }
    } else {
      throw IoError(detail::where(source, sec.line) + "unknown section [" + sec.name + "]");
    }
  }

  auto zone_index = [&](const std::string& id, int line) -> std::size_t {
    for (std::size_t i = 0; i < cfg.zones.size(); ++i)
      if (cfg.zones[i].id == id) return i;
    throw IoError(detail::where(source, line) + "unknown zone '" + id + "'");
  };

  if (uniform_inter_speed && cfg.zones.size() == 2)
    cfg.params.inter_zone_speed[0][1] = cfg.params.inter_zone_speed[1][0] = *uniform_inter_speed;
  for (const auto& [from, to, v, line] : pair_speeds)
    cfg.params.inter_zone_speed.at(zone_index(from, line)).at(zone_index(to, line)) = v;

  // Rows for a declared window override the `offpeak` rows, pair by pair.
  const std::size_t nz = cfg.zones.size();
  std::vector<double> offpeak(nz * nz, 0.0);
  for (const Row& r : rows)
    if (r.window == "offpeak") offpeak[zone_index(r.origin, r.line) * nz + zone_index(r.dest, r.line)] = r.lambda;
  for (const TimeWindow& w : cfg.windows) {
    std::vector<double> m = offpeak;
    for (const Row& r : rows)
      if (r.window == w.id) m[zone_index(r.origin, r.line) * nz + zone_index(r.dest, r.line)] = r.lambda;
    cfg.demand.by_window.emplace_back(nz, std::move(m));
  }
  for (const Row& r : rows) {
    if (r.window == "offpeak") continue;
    const bool known = std::any_of(cfg.windows.begin(), cfg.windows.end(),
                                   [&](const TimeWindow& w) { return w.id == r.window; });
    if (!known) throw IoError(detail::where(source, r.line) + "demand row names undeclared window '" + r.window + "'");
  }
  return cfg;
}

inline ScenarioConfig load_scenario(const std::string& path) {
  auto f = open_input(path);
  return parse_scenario(f, path);
}

// ---------------------------------------------------------------- simulation config

inline des::SimConfig parse_sim_config(std::istream& in, const std::string& source = "<sim>") {
  const Document doc = parse_document(in, source);
  des::SimConfig sc;
  for (const Section& sec : doc.sections) {
    if (sec.name != "sim") throw IoError(detail::where(source, sec.line) + "unknown section [" + sec.name + "]");
    for (const Line& l : sec.lines) {
      auto num = [&] { return parse_number(l.value, detail::where(source, l.number)); };
      if (l.key == "region_side") sc.region_side_km = num();
      else if (l.key == "x") sc.station_density_x = num();
      else if (l.key == "z") sc.spaces_per_station_z = num();
      else if (l.key == "m") sc.fleet_m = num();
      else if (l.key == "lambda") sc.demand_rate = num();
      else if (l.key == "v") sc.speed_kmh = num();
      else if (l.key == "horizon") sc.horizon_h = num();
      else if (l.key == "warmup") sc.warmup_h = num();
      else if (l.key == "seed") {
        const auto& s = l.value;
        std::uint64_t v = 0;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || ptr != s.data() + s.size())
          throw IoError(detail::where(source, l.number) + "seed must be a non-negative integer");
        sc.seed = v;
      } else if (l.key == "metric") {
        if (l.value == "manhattan") sc.metric = des::Metric::manhattan;
        else if (l.value == "euclidean") sc.metric = des::Metric::euclidean;
        else throw IoError(detail::where(source, l.number) + "metric must be manhattan or euclidean");
      } else if (l.key == "allow_c_to_a") {
        if (l.value != "true" && l.value != "false")
          throw IoError(detail::where(source, l.number) + "allow_c_to_a must be true or false");
        sc.allow_c_to_a = l.value == "true";
      } else {
        throw IoError(detail::where(source, l.number) + "unknown key '" + l.key + "' in [sim]");
      }
    }
  }
  return sc;
}

inline des::SimConfig load_sim_config(const std::string& path) {
  auto f = open_input(path);
  return parse_sim_config(f, path);
}

// ---------------------------------------------------------------- sweep spec

struct SweepAxis {
  std::string param;  // c_m, c_x, c_y or c_y.<zone>
  std::vector<double> values;
};

struct SweepSpec {
  std::vector<SweepAxis> axes;
  std::vector<std::pair<std::string, double>> fixed;
};

/// Inclusive arithmetic range "start:stop:step", rounded to 10 decimals to keep 0.1 steps tidy.
inline std::vector<double> expand_range(const std::string& text, const std::string& context = "") {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : text) {
    if (c == ':') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  if (parts.size() != 3) throw IoError(context + "range must be start:stop:step");
  const double a = parse_number(parts[0], context), b = parse_number(parts[1], context),
               step = parse_number(parts[2], context);
  if (!(step > 0.0) || !(b >= a)) throw IoError(context + "range needs step > 0 and stop >= start");
  const long n = std::lround(std::floor((b - a) / step + 1e-9));
  if (n > 10'000'000) throw IoError(context + "range is too long");
  std::vector<double> out;
  for (long k = 0; k <= n; ++k) out.push_back(std::round((a + k * step) * 1e10) / 1e10);
  return out;
}

inline std::vector<double> parse_list(const std::string& text, const std::string& context = "") {
  std::vector<double> out;
  std::string cur;
  std::istringstream is(text);
  while (std::getline(is, cur, ',')) out.push_back(parse_number(cur, context));
  return out;
}

inline bool is_sweep_param(const std::string& p) {
  return p == "c_m" || p == "c_x" || p == "c_y" || p.rfind("c_y.", 0) == 0;
}

inline SweepSpec parse_sweep_spec(std::istream& in, const std::string& source = "<sweep>") {
  const Document doc = parse_document(in, source);
  SweepSpec spec;
  std::map<int, SweepAxis> axes;
  for (const Section& sec : doc.sections) {
    if (sec.name == "sweep") {
      for (const Line& l : sec.lines) {
        const std::string ctx = detail::where(source, l.number);
        if (l.key.rfind("axis", 0) != 0) throw IoError(ctx + "unknown key '" + l.key + "' in [sweep]");
        const auto dot = l.key.find('.');
        const std::string idx_txt = l.key.substr(4, dot == std::string::npos ? std::string::npos : dot - 4);
        if (idx_txt != "1" && idx_txt != "2") throw IoError(ctx + "axes are numbered 1 and 2");
        SweepAxis& ax = axes[idx_txt == "1" ? 1 : 2];
        const std::string field = dot == std::string::npos ? "" : l.key.substr(dot + 1);
        if (field.empty()) ax.param = l.value;
        else if (field == "values") {
          const auto v = parse_list(l.value, ctx);
          ax.values.insert(ax.values.end(), v.begin(), v.end());
        } else if (field == "range") {
          const auto v = expand_range(l.value, ctx);
          ax.values.insert(ax.values.end(), v.begin(), v.end());
        } else {
          throw IoError(ctx + "unknown axis field '" + field + "'");
        }
      }
    } else if (sec.name == "fixed") {
      for (const Line& l : sec.lines)
        spec.fixed.emplace_back(l.key, parse_number(l.value, detail::where(source, l.number)));
    } else {
      throw IoError(detail::where(source, sec.line) + "unknown section [" + sec.name + "]");
    }
  }
  for (auto& [k, ax] : axes) {
    std::sort(ax.values.begin(), ax.values.end());
    ax.values.erase(std::unique(ax.values.begin(), ax.values.end(),
                                [](double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)); }),
                    ax.values.end());
    spec.axes.push_back(ax);
  }
  return spec;
}

inline SweepSpec load_sweep_spec(const std::string& path) {
  auto f = open_input(path);
  return parse_sweep_spec(f, path);
}

/// Semantic checks on a parsed spec, reported as violations like scenario validation.
inline std::vector<Violation> validate_sweep_spec(const SweepSpec& spec) {
  std::vector<Violation> out;
  if (spec.axes.empty() || spec.axes.size() > 2) out.push_back({"sweep_axes", "sweep needs one or two axes"});
  for (const auto& ax : spec.axes) {
    if (!is_sweep_param(ax.param)) out.push_back({"sweep_param", "cannot sweep '" + ax.param + "'"});
    if (ax.values.empty()) out.push_back({"sweep_values", "axis '" + ax.param + "' has no values"});
    for (std::size_t k = 1; k < ax.values.size(); ++k)
      if (!(ax.values[k] > ax.values[k - 1]))
        out.push_back({"sweep_values", "axis '" + ax.param + "' values are not strictly increasing"});
  }
  if (spec.axes.size() == 2 && spec.axes[0].param == spec.axes[1].param)
    out.push_back({"sweep_axes", "both axes sweep '" + spec.axes[0].param + "'"});
  for (const auto& [k, v] : spec.fixed)
    if (!is_sweep_param(k)) out.push_back({"sweep_param", "cannot fix '" + k + "'"});
  return out;
}

// ---------------------------------------------------------------- baseline

/// Current-system values keyed by report row name (x, y, z, m, yR/m; per zone x.<id> ...).
using Baseline = std::map<std::string, double>;

inline Baseline parse_baseline(std::istream& in, const std::string& source = "<baseline>") {
  const Document doc = parse_document(in, source);
  Baseline b;
  for (const Section& sec : doc.sections) {
    if (sec.name != "baseline") throw IoError(detail::where(source, sec.line) + "unknown section [" + sec.name + "]");
    for (const Line& l : sec.lines) b[l.key] = parse_number(l.value, detail::where(source, l.number));
  }
  return b;
}

inline Baseline load_baseline(const std::string& path) {
  auto f = open_input(path);
  return parse_baseline(f, path);
}

}  // namespace savpark::io
