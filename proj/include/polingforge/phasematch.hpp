#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace polingforge {

using Complex = std::complex<double>;

/// sin(x)/x with the removable singularity filled in.
double sinc(double x);

/// N fixed-width domains with orientations s_n in {-1, +1}.
///
/// Domain n (0-based here) has its origin at z = (n + 1/2) * l_c.
class DomainConfig {
 public:
  DomainConfig(double domain_width, std::vector<std::int8_t> orientations, double chi0 = 1.0);

  /// s_n = (-1)^n for n = 1..N, the first-order periodic crystal with Lambda = 2 l_c.
  static DomainConfig periodic(std::size_t domains, double domain_width);
  static DomainConfig uniform(std::size_t domains, double domain_width, int orientation = +1);
  static DomainConfig random(std::size_t domains, double domain_width, std::mt19937_64& rng);

  std::size_t size() const { return orientations_.size(); }
  double domain_width() const { return domain_width_; }
  double length() const { return domain_width_ * static_cast<double>(orientations_.size()); }
  double chi0() const { return chi0_; }
  double origin(std::size_t n) const { return (static_cast<double>(n) + 0.5) * domain_width_; }

  std::span<const std::int8_t> orientations() const { return orientations_; }
  int orientation(std::size_t n) const { return orientations_.at(n); }
  void flip(std::size_t n);

  friend bool operator==(const DomainConfig&, const DomainConfig&) = default;

 private:
  double domain_width_;
  std::vector<std::int8_t> orientations_;
  double chi0_;
};

/// Sum_n s_n exp(-i dk z_n) over all domains.
Complex domain_sum(const DomainConfig& config, double dk);

/// Raw phase-matching function chi0 * l_c * sinc(dk l_c / 2) * Sum_n s_n exp(-i dk z_n), in metres.
Complex evaluate_pmf(const DomainConfig& config, double dk);

/// Peak value of the first-order periodic crystal with the same N and l_c: 2 N l_c / pi.
double periodic_peak(std::size_t domains, double domain_width);

/// evaluate_pmf divided by periodic_peak, so a periodic crystal peaks at unit modulus.
Complex evaluate_pmf_normalized(const DomainConfig& config, double dk);

/// sinc((dk - 2 pi / period) * length / 2).
double periodic_pmf_analytic(double dk, double period, double length);

enum class TargetShape { gaussian, triangle, rectangle, custom };

TargetShape parse_target_shape(const std::string& name);
const char* target_shape_name(TargetShape shape);

/// Shape of a target profile, independent of range, sampling and height.
///
/// gaussian:  exp(-(dk - center)^2 / (2 width^2))
/// triangle:  max(0, 1 - |dk - center| / width)
/// rectangle: 1 if |dk - center| <= width else 0
/// custom:    linear interpolation of `points` (dk, relative value), 0 outside.
struct TargetShapeSpec {
  TargetShape shape = TargetShape::gaussian;
  double center = 0.0;
  double width = 0.0;
  std::vector<std::pair<double, double>> points;

  /// Throws std::invalid_argument for a nonpositive width or unsorted/negative custom points.
  void validate() const;
  double relative_value(double dk) const;
};

/// Target profile H * shape(dk) sampled at M uniform points spanning [a, b] inclusive.
class TargetFunction {
 public:
  static TargetFunction build(TargetShapeSpec shape, double range_lo, double range_hi, std::size_t samples,
                              double height);
  /// Arbitrary nonnegative sample values on the uniform grid over [a, b]. A
  /// single sample is allowed when a == b.
  static TargetFunction from_samples(double range_lo, double range_hi, std::vector<double> values);

  double value(double dk) const { return height_ * shape_.relative_value(dk); }
  std::span<const double> abscissas() const { return abscissas_; }
  std::span<const double> values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  double range_lo() const { return lo_; }
  double range_hi() const { return hi_; }
  double step() const;
  double height() const { return height_; }
  const TargetShapeSpec& shape() const { return shape_; }

 private:
  TargetFunction() = default;

  TargetShapeSpec shape_;
  double lo_ = 0.0;
  double hi_ = 0.0;
  double height_ = 0.0;
  std::vector<double> abscissas_;
  std::vector<double> values_;
};

/// How the complex Phi is compared with the real target.
///
/// modulus: | |Phi| - target |
/// complex: | exp(i dk L/2) Phi - target |, the phase referenced to the crystal centre.
enum class CostMode { modulus, complex };

CostMode parse_cost_mode(const std::string& name);
const char* cost_mode_name(CostMode mode);

/// d_s = Sum_m | Phi_s(dk_m) - target(dk_m) | under `mode`, in metres.
double cost(const DomainConfig& config, const TargetFunction& target, CostMode mode = CostMode::modulus);

/// Incremental evaluator of the cost under single-domain flips.
///
/// Holds the per-sample domain sums of one configuration. propose() returns
/// the neighbour's cost in O(M) without touching the configuration;
/// accept() commits the last proposal and flips the domain. Sums are
/// rebuilt from scratch every kRefreshInterval accepted flips.
class CostCache {
 public:
  CostCache(const DomainConfig& config, const TargetFunction& target, CostMode mode = CostMode::modulus);

  double cost() const { return cost_; }
  CostMode mode() const { return mode_; }
  std::span<const Complex> sums() const { return sums_; }

  /// Cost of `config` with domain n flipped. `config` must be the cache's configuration.
  double propose(const DomainConfig& config, std::size_t n);
  /// Commits the most recent proposal and flips the same domain in `config`.
  void accept(DomainConfig& config);
  /// Recomputes every sum from `config`.
  void refresh(const DomainConfig& config);

  static constexpr std::size_t kRefreshInterval = 10000;

 private:
  double total_cost(std::span<const Complex> sums) const;

  const TargetFunction* target_;
  CostMode mode_;
  std::vector<Complex> scale_;  // envelope (and centre phase in complex mode) per sample
  std::vector<Complex> sums_;
  std::vector<Complex> trial_;
  double cost_ = 0.0;
  double trial_cost_ = 0.0;
  std::size_t trial_domain_ = 0;
  bool has_trial_ = false;
  std::size_t accepted_since_refresh_ = 0;
};

/// Rule-of-thumb crystal parameters for a target.
struct ParameterSuggestion {
  double domain_width;     // l_c = pi / dk_peak
  std::size_t domains;     // smallest even N with N l_c >= support length
  double height_max;       // 2 N l_c / pi
  double height_default;   // 0.4 * height_max
  double support_length;   // spatial support the crystal has to cover, metres
};

/// Spatial extent of the target's Fourier transform, in metres.
///
/// gaussian: support_sigmas / width (support_sigmas standard deviations of
/// the transform, whose standard deviation is 1 / width). triangle and
/// rectangle: 16 / width.
double target_support_length(TargetShape shape, double width, double support_sigmas);

ParameterSuggestion suggest_parameters(double dk_peak, TargetShape shape, double width,
                                       double support_sigmas = 6.0);

}  // namespace polingforge
