#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "polingforge/phasematch.hpp"

namespace polingforge {

/// Identifier written next to every seed in output files.
inline constexpr const char* kRngAlgorithm = "mt19937_64/splitmix64-streams";

/// Seed of the independent stream used by restart `index` of a run seeded with `seed`.
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index);

/// Portable draws from a mt19937_64 (the standard distributions are not
/// specified bit-for-bit across library implementations).
double uniform_unit(std::mt19937_64& rng);
std::size_t uniform_index(std::mt19937_64& rng, std::size_t bound);

enum class InitialKind { random, periodic, given };

InitialKind parse_initial_kind(const std::string& name);
const char* initial_kind_name(InitialKind kind);

struct AnnealParams {
  std::uint64_t iterations = 200000;   // J
  double better_acceptance = 0.999;    // q
  double local_min_scale = 1000.0;     // A
  std::uint64_t seed = 0;
  unsigned restarts = 1;
  std::uint64_t trace_interval = 0;    // 0: J / 1000
  bool progress = false;               // progress lines on stderr

  /// Throws std::invalid_argument naming the first field out of bounds.
  void validate() const;
  std::uint64_t effective_trace_interval() const;
};

struct TracePoint {
  std::uint64_t iteration;
  double cost;
};

struct AnnealResult {
  DomainConfig best;
  double best_cost;
  double initial_cost;
  std::vector<TracePoint> trace;
  std::uint64_t iterations_used;
  std::size_t sweep_passes;
  std::uint64_t seed;
};

/// h_i = 2 * 2^(-i/J) - 1. Throws std::out_of_range for i > J.
double heat(std::uint64_t iteration, std::uint64_t total);

/// Worse-or-equal move acceptance clamp((h / A) * (d / d_new), 0, 1).
///
/// Requires d_new >= d; a strictly better neighbour is accepted with
/// probability q instead and must not be routed here.
double accept_probability(double heat_value, double local_min_scale, double cost_current, double cost_neighbour);

/// Left-to-right single-flip descent, repeated until a full pass makes no
/// strict improvement. The result is 1-flip locally optimal.
DomainConfig sweep_polish(DomainConfig config, const TargetFunction& target, CostMode mode = CostMode::modulus,
                          std::size_t* passes = nullptr);

/// One annealing chain from `initial` followed by sweep_polish of the best
/// configuration visited. `params.seed` seeds the chain directly.
AnnealResult anneal(const DomainConfig& initial, const TargetFunction& target, const AnnealParams& params,
                    CostMode mode = CostMode::modulus);

struct RestartSummary {
  unsigned index;
  std::uint64_t seed;
  double initial_cost;
  double final_cost;
  std::size_t sweep_passes;
};

struct MultiRunResult {
  AnnealResult best;
  unsigned best_index;
  std::vector<RestartSummary> runs;
};

/// Independent restarts, each on its own stream stream_seed(params.seed, r).
///
/// For InitialKind::random the starting crystal is drawn from that stream;
/// otherwise every restart starts from `start`. Up to `threads` restarts run
/// concurrently; results do not depend on the thread count.
MultiRunResult anneal_restarts(InitialKind initial, const DomainConfig& start, const TargetFunction& target,
                               const AnnealParams& params, CostMode mode = CostMode::modulus,
                               unsigned threads = 1);

}  // namespace polingforge
