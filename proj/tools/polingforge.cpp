// polingforge: design and evaluate custom-poled quasi-phase-matching crystals.

#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "polingforge/pipeline.hpp"
#include "polingforge/run_spec.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Optimize domain orientations of a poled nonlinear crystal and evaluate its photon-pair spectrum"};
  app.require_subcommand(1);

  std::string spec_path;
  std::string out_dir;
  unsigned threads = 1;
  std::uint64_t seed = 0;

  for (const char* name : {"suggest", "design", "evaluate", "jsa"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--spec", spec_path, "Run spec (JSON)")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "Output directory (overrides the spec)");
    sub->add_option("--threads", threads, "Concurrent annealing restarts")->check(CLI::PositiveNumber);
    sub->add_option("--seed", seed, "RNG seed (overrides the spec)");
  }

  CLI11_PARSE(app, argc, argv);

  try {
    const auto* sub = app.get_subcommands().front();
    polingforge::SpecOverrides overrides;
    overrides.command = polingforge::parse_command(sub->get_name());
    if (sub->count("--seed") > 0) overrides.seed = seed;
    if (!out_dir.empty()) overrides.output = out_dir;

    const auto spec = polingforge::parse_run_spec(spec_path, overrides);
    polingforge::PipelineOptions options;
    options.threads = threads;
    const auto metrics = polingforge::run_pipeline(spec, options, std::cout);
    std::cout << "metrics: " << metrics["files"]["metrics"].get<std::string>() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "polingforge: error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
