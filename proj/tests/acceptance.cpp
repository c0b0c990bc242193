// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "polingforge/annealer.hpp"
#include "polingforge/jsa.hpp"
#include "polingforge/pipeline.hpp"
#include "polingforge/poling_io.hpp"
#include "polingforge/run_spec.hpp"

using namespace polingforge;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;

// Tolerances and locked values.
constexpr double kPeriodicPurity = 0.865;
constexpr double kPeriodicPurityTolerance = 0.03;
constexpr double kPeriodicRuntimeLimit = 60.0;        // s
constexpr double kCustomPurityMin = 0.99;
constexpr double kCustomRuntimeLimit = 15.0 * 60.0;  // s
constexpr double kGridStability = 1e-3;
constexpr double kSideLobeRatioMax = 0.25;
constexpr double kSincRmsMax = 0.02;
constexpr double kFlipRelativeMax = 1e-10;
constexpr int kFlips = 1000;
constexpr double kDoubleGaussianTolerance = 1e-3;
constexpr double kSeparableTolerance = 1e-9;
// First verified run of the shipped presets (seed 2016): 0.0827714 m and 0.508268 m, plus 5%.
constexpr double kTriangleCostMax = 0.0870;
constexpr double kRectangleCostMax = 0.534;

using Clock = std::chrono::steady_clock;

int failures = 0;
std::ostringstream sink;

void report(int id, const char* name, bool pass, const std::string& detail) {
  std::printf("%s [%d] %s: %s\n", pass ? "PASS" : "FAIL", id, name, detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

double seconds(Clock::time_point start) { return std::chrono::duration<double>(Clock::now() - start).count(); }

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

fs::path work_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "polingforge_acceptance" / name;
  fs::remove_all(dir);
  return dir;
}

RunSpec preset(const std::string& name, const std::string& out) {
  SpecOverrides o;
  o.output = work_dir(out);
  return parse_run_spec(fs::path(POLINGFORGE_PRESET_DIR) / (name + ".spec"), o);
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

double target_sum(const TargetFunction& t) {
  double s = 0.0;
  for (const double v : t.values()) s += v;
  return s;
}

}  // namespace

int main() {
  // 1. Periodic baseline purity.
  {
    const auto spec = preset("fig2a", "fig2a");
    const auto start = Clock::now();
    const auto crystal = DomainConfig::periodic(*spec.crystal.domains, *spec.crystal.domain_width);
    const auto grid = build_jsa(crystal, spec.dispersion, spec.pump, spec.jsa.grid);
    const double p = schmidt_decompose(grid).purity;
    const double t = seconds(start);
    const bool ok = std::abs(p - kPeriodicPurity) <= kPeriodicPurityTolerance && t < kPeriodicRuntimeLimit &&
                    spec.jsa.grid.points == 512;
    report(1, "periodic baseline purity", ok,
           fmt("N=%zu G=%zu P=%.6f (require %.3f +/- %.3f), %.1f s (limit %.0f s)", crystal.size(),
               spec.jsa.grid.points, p, kPeriodicPurity, kPeriodicPurityTolerance, t, kPeriodicRuntimeLimit));
  }

  // 2 and 3. Custom-poled crystal and side-lobe suppression.
  {
    const auto spec = preset("fig2c", "fig2c");
    const auto start = Clock::now();
    const auto metrics = run_pipeline(spec, {}, sink);
    const double t = seconds(start);
    const double p = metrics["purity"].get<double>();
    const auto best = read_poling_file(metrics["files"]["poling"].get<std::string>()).config;
    const double p768 = schmidt_decompose(build_jsa(best, spec.dispersion, spec.pump, {768, 4.0})).purity;
    const bool ok = p >= kCustomPurityMin && t <= kCustomRuntimeLimit && spec.anneal.restarts == 5 &&
                    std::abs(p768 - p) < kGridStability;
    report(2, "custom-poled purity", ok,
           fmt("N=%zu J=%llu restarts=%u best restart %d: P=%.6f (require >= %.2f), G=768 P=%.6f "
               "(|diff| %.1e < %.0e), %.1f s (limit %.0f s)",
               best.size(), static_cast<unsigned long long>(spec.anneal.iterations), spec.anneal.restarts,
               metrics["best_restart"].get<int>(), p, kCustomPurityMin, p768, std::abs(p768 - p), kGridStability, t,
               kCustomRuntimeLimit));

    const auto target = spec.make_target(best.size(), best.domain_width());
    const double annealed = cost(best, target, spec.target.mode);
    const double periodic = cost(DomainConfig::periodic(740, best.domain_width()), target, spec.target.mode);
    const double ratio = annealed / periodic;
    report(3, "side-lobe suppression", ratio <= kSideLobeRatioMax,
           fmt("annealed cost %.6g m, periodic N=740 cost %.6g m, ratio %.4f (require <= %.2f)", annealed, periodic,
               ratio, kSideLobeRatioMax));
  }

  // 4. Sinc equivalence.
  {
    const auto config = DomainConfig::periodic(740, 23e-6);
    const double period = 2 * config.domain_width();
    const double length = config.length();
    const double peak = 2 * kPi / period;
    const double raw_peak = std::abs(evaluate_pmf(config, peak));
    const int samples = 2001;
    double sum = 0.0;
    for (int i = 0; i < samples; ++i) {
      const double dk = peak - 2 * kPi / length + 4 * kPi / length * i / (samples - 1);
      const double a = std::abs(evaluate_pmf(config, dk)) / raw_peak;
      const double b = std::abs(periodic_pmf_analytic(dk, period, length));
      sum += (a - b) * (a - b);
    }
    const double rms = std::sqrt(sum / samples);
    report(4, "sinc equivalence", rms < kSincRmsMax,
           fmt("N=740 main lobe, %d samples, RMS %.3e (require < %.2f)", samples, rms, kSincRmsMax));
  }

  // 5. Incremental cost against a from-scratch oracle.
  {
    std::mt19937_64 rng(5);
    const double l_c = 23e-6;
    const double peak = kPi / l_c;
    const auto target = TargetFunction::build({TargetShape::gaussian, peak, 250.0, {}}, peak * 0.975, peak * 1.025,
                                              2001, 0.8 * 500 * l_c / kPi);
    const std::vector<double> dk(target.abscissas().begin(), target.abscissas().end());
    const std::vector<double> values(target.values().begin(), target.values().end());
    double worst = 0.0;
    int flips = 0;
    for (int round = 0; round < 4; ++round) {
      auto config = DomainConfig::random(500, l_c, rng);
      CostCache cache(config, target);
      for (int i = 0; i < kFlips / 4; ++i, ++flips) {
        const std::size_t n = uniform_index(rng, config.size());
        const double fast = cache.propose(config, n);
        auto flipped = config;
        flipped.flip(n);
        const double slow = oracle::cost(flipped.orientations(), l_c, dk, values);
        worst = std::max(worst, std::abs(fast - slow) / slow);
        cache.accept(config);
      }
    }
    report(5, "delta-cost oracle", worst <= kFlipRelativeMax,
           fmt("%d flips on random N=500 crystals, worst relative error %.2e (require <= %.0e)", flips, worst,
               kFlipRelativeMax));
  }

  // 6. Schmidt oracle.
  {
    const std::size_t g = 512;
    const double extent = 4.0;
    JsaGrid grid;
    grid.omega_a.resize(g);
    for (std::size_t i = 0; i < g; ++i) grid.omega_a[i] = -extent + 2 * extent * static_cast<double>(i) / (g - 1);
    grid.omega_b = grid.omega_a;
    grid.mismatch = Eigen::MatrixXd::Zero(g, g);
    grid.amplitude.resize(g, g);
    const double sp = 1.0, sm = 0.5;
    for (std::size_t i = 0; i < g; ++i) {
      for (std::size_t j = 0; j < g; ++j) {
        const double a = grid.omega_a[i], b = grid.omega_b[j];
        grid.amplitude(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
            std::exp(-(a + b) * (a + b) / (4 * sp * sp) - (a - b) * (a - b) / (4 * sm * sm));
      }
    }
    grid.normalize();
    const double p = schmidt_decompose(grid).purity;
    const double analytic = 2 * sp * sm / (sp * sp + sm * sm);

    for (std::size_t i = 0; i < g; ++i) {
      for (std::size_t j = 0; j < g; ++j) {
        const double a = grid.omega_a[i], b = grid.omega_b[j];
        grid.amplitude(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
            std::exp(-a * a) * std::exp(-0.5 * (b - 0.3) * (b - 0.3));
      }
    }
    grid.normalize();
    const double separable = schmidt_decompose(grid).purity;
    const bool ok = std::abs(p - analytic) <= kDoubleGaussianTolerance && std::abs(separable - 1.0) <= kSeparableTolerance;
    report(6, "Schmidt oracle", ok,
           fmt("double Gaussian G=512 P=%.6f vs analytic %.6f (tol %.0e); separable P-1=%.2e (tol %.0e)", p, analytic,
               kDoubleGaussianTolerance, separable - 1.0, kSeparableTolerance));
  }

  // 7. Schedule exactness.
  {
    const std::uint64_t j = 200000;
    const double eps = std::numeric_limits<double>::epsilon();
    const double h0 = heat(0, j), hj = heat(j, j), hh = heat(j / 2, j);
    const double p = accept_probability(1.0, 1000.0, 0.0721, 0.0721);
    const bool ok = h0 == 1.0 && hj == 0.0 && std::abs(hh - (std::sqrt(2.0) - 1.0)) <= eps && p == 1e-3;
    report(7, "schedule exactness", ok,
           fmt("J=%llu: h(0)=%.17g h(J)=%.17g h(J/2)-(sqrt2-1)=%.1e; accept(1, 1000, d, d)=%.17g",
               static_cast<unsigned long long>(j), h0, hj, hh - (std::sqrt(2.0) - 1.0), p));
  }

  // 8 and 9. Determinism and the triangle and rectangle targets.
  {
    const auto tri_a = preset("fig3a", "fig3a_first");
    const auto tri_b = preset("fig3a", "fig3a_second");
    const auto m_tri = run_pipeline(tri_a, {}, sink);
    run_pipeline(tri_b, {}, sink);
    const auto first = slurp(tri_a.output / "poling.txt");
    const auto second = slurp(tri_b.output / "poling.txt");

    const auto rect = preset("fig3b", "fig3b");
    const auto m_rect = run_pipeline(rect, {}, sink);
    const auto rect_a = slurp(rect.output / "poling.txt");
    const auto rect_again = preset("fig3b", "fig3b_threads");
    run_pipeline(rect_again, {4, true}, sink);
    const bool same = !first.empty() && first == second && rect_a == slurp(rect_again.output / "poling.txt");
    report(8, "determinism", same,
           fmt("fig3a twice: %zu vs %zu bytes, %s; fig3b with 1 and 4 threads: %s", first.size(), second.size(),
               first == second ? "identical" : "different",
               rect_a == slurp(rect_again.output / "poling.txt") ? "identical" : "different"));

    const double tri_cost = m_tri["best_cost"].get<double>();
    const double rect_cost = m_rect["best_cost"].get<double>();
    const auto tri_target = tri_a.make_target(*tri_a.crystal.domains, *tri_a.crystal.domain_width);
    const auto rect_target = rect.make_target(*rect.crystal.domains, *rect.crystal.domain_width);
    const double tri_residual = tri_cost / target_sum(tri_target);
    const double rect_residual = rect_cost / target_sum(rect_target);
    const bool ok = tri_cost <= kTriangleCostMax && rect_cost <= kRectangleCostMax && rect_residual > tri_residual &&
                    *tri_a.crystal.domains == 3500 && *rect.crystal.domains == 5000;
    report(9, "triangle and rectangle targets", ok,
           fmt("triangle N=3500 cost %.6g m (limit %.4g), rectangle N=5000 cost %.6g m (limit %.4g); "
               "relative residual triangle %.4f < rectangle %.4f",
               tri_cost, kTriangleCostMax, rect_cost, kRectangleCostMax, tri_residual, rect_residual));
  }

  std::printf("%s: %d of 9 criteria failed\n", failures == 0 ? "ACCEPTED" : "REJECTED", failures);
  return failures == 0 ? 0 : 1;
}
