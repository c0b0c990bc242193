#pragma once

#include <iosfwd>

#include <json.hpp>

#include "polingforge/run_spec.hpp"

namespace polingforge {

struct PipelineOptions {
  unsigned threads = 1;
  bool write_metrics = true;
};

/// Runs `spec.command` and writes its artifacts under `spec.output`.
///
/// suggest:  prints l_c, N and the height bounds; writes metrics.json.
/// design:   anneals (with restarts) and writes poling.txt, curve.csv and
///           metrics.json; adds purity when the spec has a `jsa` block.
/// evaluate: curve.csv and cost for the poling file.
/// jsa:      jsa.csv, schmidt.csv and purity/entropy for the crystal.
///
/// Returns the metrics document. Human-readable progress goes to `log`.
nlohmann::json run_pipeline(const RunSpec& spec, const PipelineOptions& options, std::ostream& log);

}  // namespace polingforge
