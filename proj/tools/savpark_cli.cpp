// savpark command-line front end: solve, sweep, simulate, validate.
//
// exit codes: 0 ok, 1 usage, 2 validation, 3 regime/infeasible, 4 I/O

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "savpark/savpark.hpp"

namespace {

enum Exit { ok = 0, usage = 1, invalid = 2, regime = 3, io_failure = 4 };

savpark::FactorMode factor_mode(const std::string& s) {
  if (s == "eq26") return savpark::FactorMode::eq26;
  if (s == "eq2") return savpark::FactorMode::eq2;
  throw savpark::DomainError("unknown factor mode '" + s + "'");
}

void write_output(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw savpark::IoError("cannot write '" + path + "'");
  f << text;
  if (!f) throw savpark::IoError("write to '" + path + "' failed");
}

void print_violations(const std::vector<savpark::Violation>& v) {
  for (const auto& e : v) std::cerr << "[" << e.code << "] " << e.message << "\n";
}

// Parse + validate; prints violations and returns nullopt when invalid.
std::optional<savpark::ScenarioConfig> load_valid(const std::string& path) {
  auto cfg = savpark::io::load_scenario(path);
  const auto v = savpark::validate_scenario(cfg);
  if (!v.empty()) {
    print_violations(v);
    return std::nullopt;
  }
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Parking and fleet planning for shared autonomous vehicles"};
  app.require_subcommand(1);

  std::string scenario, fmt = "table", mode = "eq26", baseline_path, spec_path, out_path, trace_path;
  unsigned workers = 0;
  std::optional<std::uint64_t> seed;

  auto* solve_s = app.add_subcommand("solve-s", "single-zone closed-form plan");
  auto* solve_t = app.add_subcommand("solve-t", "two-zone numerical plan");
  for (auto* sc : {solve_s, solve_t}) {
    sc->add_option("scenario", scenario, "scenario file")->required();
    sc->add_option("--factor-mode", mode, "LOS factor: eq26 (1+p+ap-ap^2) or eq2 (p+ap-ap^2)")
        ->check(CLI::IsMember({"eq26", "eq2"}));
    sc->add_option("--format", fmt, "csv, json or table")->check(CLI::IsMember({"csv", "json", "table"}));
    sc->add_option("--baseline", baseline_path, "current-system values for the delta column");
  }
  auto* sweep = app.add_subcommand("sweep", "cost sensitivity grid");
  sweep->add_option("scenario", scenario, "base scenario file")->required();
  sweep->add_option("--spec", spec_path, "sweep spec file")->required();
  sweep->add_option("--workers", workers, "worker threads (default: hardware concurrency)");
  sweep->add_option("--out", out_path, "write the report here instead of stdout");
  sweep->add_option("--format", fmt, "csv, json or table")->check(CLI::IsMember({"csv", "json", "table"}));
  sweep->add_option("--factor-mode", mode, "eq26 or eq2")->check(CLI::IsMember({"eq26", "eq2"}));

  auto* simulate = app.add_subcommand("simulate", "discrete-event check of a station/fleet design");
  simulate->add_option("config", scenario, "simulation config file")->required();
  simulate->add_option("--seed", seed, "override the config seed");
  simulate->add_option("--trace", trace_path, "per-event csv trace");

  auto* validate = app.add_subcommand("validate", "check a scenario file");
  validate->add_option("scenario", scenario, "scenario file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? Exit::ok : Exit::usage;
  }

  try {
    if (*validate) {
      const auto cfg = savpark::io::load_scenario(scenario);
      const auto v = savpark::validate_scenario(cfg);
      if (!v.empty()) {
        print_violations(v);
        return Exit::invalid;
      }
      std::cout << "ok: " << cfg.zone_count() << " zone(s), " << cfg.windows.size() << " windows\n";
      return Exit::ok;
    }

    if (*simulate) {
      auto sc = savpark::io::load_sim_config(scenario);
      if (seed) sc.seed = *seed;
      savpark::des::SimStats st;
      if (!trace_path.empty()) {
        std::ofstream trace(trace_path);
        if (!trace) throw savpark::IoError("cannot write '" + trace_path + "'");
        st = savpark::des::run_simulation(sc, &trace);
      } else {
        st = savpark::des::run_simulation(sc);
      }
      std::cout << savpark::report::render_sim_stats(st);
      return Exit::ok;
    }

    const auto format = savpark::report::parse_format(fmt);
    const auto fm = factor_mode(mode);
    std::optional<savpark::io::Baseline> baseline;
    if (!baseline_path.empty()) baseline = savpark::io::load_baseline(baseline_path);
    const savpark::io::Baseline* bp = baseline ? &*baseline : nullptr;

    const auto cfg = load_valid(scenario);
    if (!cfg) return Exit::invalid;

    if (*solve_s) {
      if (cfg->zone_count() != 1) {
        std::cerr << "solve-s needs a single-zone scenario\n";
        return Exit::invalid;
      }
      const auto plan = savpark::solve_single_zone(*cfg, fm);
      for (const auto& w : plan.warnings) std::cerr << "warning: " << w << "\n";
      std::cout << savpark::report::render_plan(plan, format, bp);
      return Exit::ok;
    }
    if (*solve_t) {
      if (cfg->zone_count() != 2) {
        std::cerr << "solve-t needs a two-zone scenario\n";
        return Exit::invalid;
      }
      const auto plan = savpark::solve_two_zone(*cfg, fm);
      std::cout << savpark::report::render_plan(*cfg, plan, format, bp);
      return Exit::ok;
    }
    if (*sweep) {
      const auto spec = savpark::io::load_sweep_spec(spec_path);
      const auto res = savpark::run_sweep(*cfg, spec, fm, workers);
      write_output(savpark::report::render_sweep(res, format), out_path);
      return Exit::ok;
    }
  } catch (const savpark::ValidationError& e) {
    std::cerr << "validation: " << e.what() << "\n";
    return Exit::invalid;
  } catch (const savpark::RegimeError& e) {
    std::cerr << "regime error (" << e.what_failed() << "): " << e.what() << "\n";
    return Exit::regime;
  } catch (const savpark::InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return Exit::regime;
  } catch (const savpark::IoError& e) {
    std::cerr << "i/o: " << e.what() << "\n";
    return Exit::io_failure;
  } catch (const savpark::DomainError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return Exit::invalid;
  } catch (const savpark::EvaluationError& e) {
    std::cerr << "evaluation: " << e.what() << "\n";
    return Exit::regime;
  }
  return Exit::usage;
}
