#include "polingforge/annealer.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <thread>

namespace polingforge {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Relative margin below which a polish flip does not count as an improvement.
constexpr double kPolishTolerance = 1e-12;

}  // namespace

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t state = seed;
  std::uint64_t out = 0;
  for (std::uint64_t i = 0; i <= index; ++i) out = splitmix64(state);
  return out;
}

double uniform_unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::size_t uniform_index(std::mt19937_64& rng, std::size_t bound) {
  const auto wide = static_cast<unsigned __int128>(rng()) * static_cast<unsigned __int128>(bound);
  return static_cast<std::size_t>(wide >> 64);
}

InitialKind parse_initial_kind(const std::string& name) {
  if (name == "random") return InitialKind::random;
  if (name == "periodic") return InitialKind::periodic;
  if (name == "file") return InitialKind::given;
  throw std::invalid_argument("unknown initial configuration '" + name + "' (expected random, periodic or file)");
}

const char* initial_kind_name(InitialKind kind) {
  switch (kind) {
    case InitialKind::random: return "random";
    case InitialKind::periodic: return "periodic";
    case InitialKind::given: return "file";
  }
  return "?";
}

void AnnealParams::validate() const {
  if (iterations < 1) throw std::invalid_argument("J (iterations) must be >= 1");
  if (!(better_acceptance > 0.0 && better_acceptance <= 1.0)) {
    throw std::invalid_argument("q must satisfy 0 < q <= 1");
  }
  if (!(local_min_scale > 0.0)) throw std::invalid_argument("A must be > 0");
  if (restarts < 1) throw std::invalid_argument("restarts must be >= 1");
}

std::uint64_t AnnealParams::effective_trace_interval() const {
  if (trace_interval > 0) return trace_interval;
  return std::max<std::uint64_t>(1, iterations / 1000);
}

double heat(std::uint64_t iteration, std::uint64_t total) {
  if (total == 0) throw std::invalid_argument("heat schedule needs J >= 1");
  if (iteration > total) throw std::out_of_range("heat: iteration exceeds J");
  return 2.0 * std::exp2(-static_cast<double>(iteration) / static_cast<double>(total)) - 1.0;
}

double accept_probability(double heat_value, double local_min_scale, double cost_current, double cost_neighbour) {
  if (cost_neighbour < cost_current) {
    throw std::invalid_argument("accept_probability: neighbour is better; use the q branch");
  }
  if (!(cost_current > 0.0)) throw std::invalid_argument("accept_probability: current cost must be positive");
  const double p = (heat_value / local_min_scale) * (cost_current / cost_neighbour);
  return std::clamp(p, 0.0, 1.0);
}

DomainConfig sweep_polish(DomainConfig config, const TargetFunction& target, CostMode mode, std::size_t* passes) {
  CostCache cache(config, target, mode);
  std::size_t count = 0;
  bool improved = true;
  while (improved) {
    improved = false;
    ++count;
    for (std::size_t n = 0; n < config.size(); ++n) {
      const double current = cache.cost();
      const double candidate = cache.propose(config, n);
      if (candidate < current - kPolishTolerance * current) {
        cache.accept(config);
        improved = true;
      }
    }
    if (improved) cache.refresh(config);
  }
  if (passes != nullptr) *passes = count;
  return config;
}

AnnealResult anneal(const DomainConfig& initial, const TargetFunction& target, const AnnealParams& params,
                    CostMode mode) {
  params.validate();
  std::mt19937_64 rng(params.seed);
  const std::uint64_t total = params.iterations;
  const std::uint64_t interval = params.effective_trace_interval();

  DomainConfig current = initial;
  CostCache cache(current, target, mode);
  DomainConfig best = current;
  double best_cost = cache.cost();

  AnnealResult result{initial, best_cost, best_cost, {}, 0, 0, params.seed};
  result.trace.push_back({0, best_cost});

  std::uint64_t i = 0;
  for (; i < total; ++i) {
    if (cache.cost() == 0.0) break;
    const double h = heat(i, total);
    const std::size_t n = uniform_index(rng, current.size());
    const double d = cache.cost();
    const double d_new = cache.propose(current, n);
    const double p = d_new < d ? params.better_acceptance : accept_probability(h, params.local_min_scale, d, d_new);
    if (uniform_unit(rng) < p) {
      cache.accept(current);
      if (cache.cost() < best_cost) {
        best_cost = cache.cost();
        best = current;
      }
    }
    if ((i + 1) % interval == 0) {
      result.trace.push_back({i + 1, cache.cost()});
      if (params.progress) std::fprintf(stderr, "iter=%llu cost=%.9g h=%.6f\n",
                                        static_cast<unsigned long long>(i + 1), cache.cost(), h);
    }
  }
  result.iterations_used = i;

  result.best = sweep_polish(std::move(best), target, mode, &result.sweep_passes);
  result.best_cost = cost(result.best, target, mode);
  return result;
}

MultiRunResult anneal_restarts(InitialKind initial, const DomainConfig& start, const TargetFunction& target,
                               const AnnealParams& params, CostMode mode, unsigned threads) {
  params.validate();
  std::vector<std::optional<AnnealResult>> results(params.restarts);

  auto run_one = [&](unsigned r) {
    AnnealParams p = params;
    p.seed = stream_seed(params.seed, r);
    if (initial == InitialKind::random) {
      std::mt19937_64 init_rng(stream_seed(p.seed, 0));
      const auto first = DomainConfig::random(start.size(), start.domain_width(), init_rng);
      results[r] = anneal(first, target, p, mode);
    } else {
      results[r] = anneal(start, target, p, mode);
    }
  };

  const unsigned workers = std::clamp(threads, 1u, params.restarts);
  if (workers == 1) {
    for (unsigned r = 0; r < params.restarts; ++r) run_one(r);
  } else {
    std::atomic<unsigned> next{0};
    std::vector<std::jthread> pool;
    std::exception_ptr failure;
    std::mutex failure_mutex;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (unsigned r = next++; r < params.restarts; r = next++) {
          try {
            run_one(r);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
    pool.clear();
    if (failure) std::rethrow_exception(failure);
  }

  MultiRunResult out{*results[0], 0, {}};
  for (unsigned r = 0; r < params.restarts; ++r) {
    const auto& res = *results[r];
    out.runs.push_back({r, res.seed, res.initial_cost, res.best_cost, res.sweep_passes});
    if (res.best_cost < out.best.best_cost) {
      out.best = res;
      out.best_index = r;
    }
  }
  return out;
}

}  // namespace polingforge
