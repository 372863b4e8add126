#pragma once

// Cost-parameter sweeps. Every cell is an independent solve; results land in grid order no matter
// which worker finishes first, and a cell that fails keeps an error tag instead of aborting.

#include <atomic>
#include <cmath>
#include <limits>
#include <string>
#include <thread>
#include <vector>

#include "savpark/error.hpp"
#include "savpark/io.hpp"
#include "savpark/sappm.hpp"
#include "savpark/scenario.hpp"
#include "savpark/tappm.hpp"

namespace savpark {

struct SweepRecord {
  double axis1 = 0.0;
  double axis2 = std::numeric_limits<double>::quiet_NaN();  // NaN for one-axis sweeps
  bool ok = false;
  std::string error;  // regime tag or error class when !ok
  double cost = 0.0;
  double ta_min = 0.0;
  double m = 0.0;
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  bool binding = false;
};

struct SweepResult {
  std::vector<std::string> axis_names;
  std::vector<std::size_t> shape;
  std::vector<SweepRecord> records;  // row-major, axis 2 fastest
};

/// Apply one sweep parameter to a scenario copy.
inline void apply_sweep_param(ScenarioConfig& cfg, const std::string& param, double value) {
  if (param == "c_m") cfg.costs.c_m = value;
  else if (param == "c_x") cfg.costs.c_x = value;
  else if (param == "c_y")
    for (auto& z : cfg.zones) z.land_cost_cy = value;
  else if (param.rfind("c_y.", 0) == 0) {
    const std::string id = param.substr(4);
    for (auto& z : cfg.zones)
      if (z.id == id) {
        z.land_cost_cy = value;
        return;
      }
    throw ValidationError("sweep parameter names unknown zone '" + id + "'");
  } else {
    throw ValidationError("cannot sweep '" + param + "'");
  }
}

/// One grid cell. Two-zone cells report area-weighted densities and the larger zonal wait.
inline SweepRecord solve_cell(const ScenarioConfig& cfg, FactorMode mode) {
  SweepRecord r;
  try {
    if (cfg.zone_count() == 1) {
      const SingleZonePlan p = solve_single_zone(single_zone_inputs(cfg), mode);
      r.cost = p.cost_total;
      r.ta_min = p.ta_star * 60.0;
      r.m = p.m_star;
      r.x = p.x_star;
      r.y = p.y_star;
      r.z = p.z_star;
      r.binding = p.constraint_binding;
    } else {
      if (!(cfg.costs.c_m > 0.0)) throw RegimeError("C_m", "fleet cost C_m must be positive");
      const TwoZonePlan p = solve_two_zone(cfg, mode);
      const double r1 = cfg.zones[0].area_km2, r2 = cfg.zones[1].area_km2;
      r.cost = p.cost_total;
      r.ta_min = std::max(p.ta[0], p.ta[1]) * 60.0;
      r.m = p.m_total;
      r.x = (p.x[0] * r1 + p.x[1] * r2) / (r1 + r2);
      r.y = (p.y[0] * r1 + p.y[1] * r2) / (r1 + r2);
      r.z = r.y / r.x;
      r.binding = p.at_upper_bound[0] || p.at_upper_bound[1];
    }
    r.ok = true;
  } catch (const RegimeError& e) {
    r.error = "regime:" + e.what_failed();
  } catch (const InfeasibleError&) {
    r.error = "infeasible";
  } catch (const ValidationError&) {
    r.error = "invalid";
  } catch (const DomainError&) {
    r.error = "domain";
  } catch (const EvaluationError&) {
    r.error = "evaluation";
  }
  return r;
}

inline SweepResult run_sweep(const ScenarioConfig& base, const io::SweepSpec& spec, FactorMode mode = FactorMode::eq26,
                             unsigned workers = 0) {
  const auto problems = io::validate_sweep_spec(spec);
  if (!problems.empty()) {
    std::string msg = "invalid sweep spec:";
    for (const auto& v : problems) msg += " [" + v.code + "] " + v.message + ";";
    throw ValidationError(msg);
  }
  ScenarioConfig fixed = base;
  for (const auto& [k, v] : spec.fixed) apply_sweep_param(fixed, k, v);
  require_valid(fixed);
  // fail early on unknown zone names rather than in every cell
  for (const auto& ax : spec.axes) {
    ScenarioConfig probe = fixed;
    apply_sweep_param(probe, ax.param, ax.values.front());
  }

  SweepResult res;
  for (const auto& ax : spec.axes) {
    res.axis_names.push_back(ax.param);
    res.shape.push_back(ax.values.size());
  }
  const std::size_t n1 = spec.axes[0].values.size();
  const std::size_t n2 = spec.axes.size() == 2 ? spec.axes[1].values.size() : 1;
  res.records.resize(n1 * n2);

  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t k = next++; k < res.records.size(); k = next++) {
      ScenarioConfig cfg = fixed;
      const std::size_t i = k / n2, j = k % n2;
      apply_sweep_param(cfg, spec.axes[0].param, spec.axes[0].values[i]);
      if (spec.axes.size() == 2) apply_sweep_param(cfg, spec.axes[1].param, spec.axes[1].values[j]);
      SweepRecord r = solve_cell(cfg, mode);
      r.axis1 = spec.axes[0].values[i];
      if (spec.axes.size() == 2) r.axis2 = spec.axes[1].values[j];
      res.records[k] = std::move(r);
    }
  };
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, res.records.size()));
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  return res;
}

}  // namespace savpark
