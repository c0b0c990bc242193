#include "polingforge/pipeline.hpp"

#include <chrono>
#include <fstream>
#include <numbers>
#include <ostream>

#include "polingforge/poling_io.hpp"

namespace polingforge {

namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

DomainConfig starting_crystal(const RunSpec& spec) {
  const auto& c = spec.crystal;
  switch (c.initial) {
    case InitialKind::given:
      return read_poling_file(*c.poling_file).config;
    case InitialKind::periodic:
      return DomainConfig::periodic(*c.domains, *c.domain_width);
    case InitialKind::random:
      break;
  }
  // placeholder geometry; anneal_restarts draws the actual orientations
  return DomainConfig::uniform(*c.domains, *c.domain_width);
}

json leading(std::span<const double> b, std::size_t n) {
  json out = json::array();
  for (std::size_t k = 0; k < std::min(n, b.size()); ++k) out.push_back(b[k]);
  return out;
}

void run_jsa(const RunSpec& spec, const DomainConfig& crystal, const std::filesystem::path& dir, json& metrics,
             std::ostream& log) {
  const auto start = Clock::now();
  const auto grid = build_jsa(crystal, spec.dispersion, spec.pump, spec.jsa.grid);
  const auto schmidt = schmidt_decompose(grid);
  metrics["purity"] = schmidt.purity;
  metrics["entropy_bits"] = schmidt.entropy_bits;
  metrics["schmidt_leading"] = leading(schmidt.coefficients, 16);
  log << "purity P = " << schmidt.purity << ", entropy E = " << schmidt.entropy_bits << " bits\n";

  if (spec.jsa.band_window && spec.has_target) {
    const auto windowed = apply_band_window(grid, *spec.target.range_lo, *spec.target.range_hi);
    const auto filtered = schmidt_decompose(windowed);
    metrics["purity_band_window"] = filtered.purity;
    metrics["entropy_bits_band_window"] = filtered.entropy_bits;
    log << "band-windowed purity P = " << filtered.purity << "\n";
  }
  if (spec.jsa.write_grid) {
    write_jsa_csv(dir / "jsa.csv", grid);
    metrics["files"]["jsa"] = (dir / "jsa.csv").string();
  }
  write_schmidt_csv(dir / "schmidt.csv", schmidt.coefficients);
  metrics["files"]["schmidt"] = (dir / "schmidt.csv").string();
  metrics["timings_s"]["jsa"] = seconds_since(start);
}

}  // namespace

json run_pipeline(const RunSpec& spec, const PipelineOptions& options, std::ostream& log) {
  const auto start = Clock::now();
  const auto& dir = spec.output;
  std::filesystem::create_directories(dir);

  json metrics;
  metrics["command"] = command_name(spec.command);
  metrics["resolved_spec"] = spec.resolved;
  metrics["files"] = json::object();
  metrics["timings_s"] = json::object();

  switch (spec.command) {
    case Command::suggest: {
      const double dk_peak = spec.target.shape.center;
      const auto s = suggest_parameters(dk_peak, spec.target.shape.shape, spec.target.shape.width,
                                        spec.target.support_sigmas);
      metrics["suggestion"] = {{"l_c_m", s.domain_width},
                               {"N", s.domains},
                               {"H_max_m", s.height_max},
                               {"H_default_m", s.height_default},
                               {"support_length_m", s.support_length},
                               {"width_rad_per_m", spec.target.shape.width}};
      log << "l_c = " << s.domain_width * 1e6 << " um\n"
          << "N = " << s.domains << "\n"
          << "H_max = " << s.height_max << " m\n"
          << "H_default = " << s.height_default << " m\n"
          << "target width = " << spec.target.shape.width << " rad/m\n";
      break;
    }
    case Command::design: {
      const auto crystal = starting_crystal(spec);
      const auto target = spec.make_target(crystal.size(), crystal.domain_width());
      const auto anneal_start = Clock::now();
      const auto run = anneal_restarts(spec.crystal.initial, crystal, target, spec.anneal, spec.target.mode,
                                       options.threads);
      metrics["timings_s"]["anneal"] = seconds_since(anneal_start);

      json restart_costs = json::array();
      json restart_seeds = json::array();
      for (const auto& r : run.runs) {
        restart_costs.push_back(r.final_cost);
        restart_seeds.push_back(r.seed);
        log << "restart " << r.index << ": seed " << r.seed << ", cost " << r.initial_cost << " -> " << r.final_cost
            << " m (" << r.sweep_passes << " sweep passes)\n";
      }
      metrics["rng"] = {{"algorithm", kRngAlgorithm}, {"seed", spec.anneal.seed}};
      metrics["restart_costs"] = restart_costs;
      metrics["restart_seeds"] = restart_seeds;
      metrics["best_restart"] = run.best_index;
      metrics["best_cost"] = run.best.best_cost;
      metrics["initial_cost"] = run.best.initial_cost;
      metrics["iterations_used"] = run.best.iterations_used;
      metrics["sweep_passes"] = run.best.sweep_passes;
      json trace = json::array();
      for (const auto& t : run.best.trace) trace.push_back({t.iteration, t.cost});
      metrics["trace"] = trace;

      write_poling_file(dir / "poling.txt", run.best.best, run.best.best_cost, spec.target.mode,
                        {{"rng", kRngAlgorithm},
                         {"seed", std::to_string(spec.anneal.seed)},
                         {"restart", std::to_string(run.best_index)}});
      write_curve_csv(dir / "curve.csv", run.best.best, target);
      metrics["files"]["poling"] = (dir / "poling.txt").string();
      metrics["files"]["curve"] = (dir / "curve.csv").string();
      log << "best cost " << run.best.best_cost << " m (restart " << run.best_index << ")\n";

      if (spec.has_jsa) run_jsa(spec, run.best.best, dir, metrics, log);
      break;
    }
    case Command::evaluate: {
      const auto crystal = starting_crystal(spec);
      const auto target = spec.make_target(crystal.size(), crystal.domain_width());
      const double d = cost(crystal, target, spec.target.mode);
      metrics["cost"] = d;
      write_curve_csv(dir / "curve.csv", crystal, target);
      metrics["files"]["curve"] = (dir / "curve.csv").string();
      log << "cost " << d << " m\n";
      if (spec.has_jsa) run_jsa(spec, crystal, dir, metrics, log);
      break;
    }
    case Command::jsa: {
      const auto crystal = starting_crystal(spec);
      if (spec.has_target) {
        const auto target = spec.make_target(crystal.size(), crystal.domain_width());
        metrics["cost"] = cost(crystal, target, spec.target.mode);
      }
      run_jsa(spec, crystal, dir, metrics, log);
      break;
    }
  }

  metrics["timings_s"]["total"] = seconds_since(start);
  if (options.write_metrics) {
    const auto path = dir / "metrics.json";
    metrics["files"]["metrics"] = path.string();
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << metrics.dump(2) << "\n";
  }
  return metrics;
}

}  // namespace polingforge
