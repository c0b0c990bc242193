#include "polingforge/phasematch.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace polingforge {

namespace {

// Phasor recurrences are re-seeded from an exact sincos this often.
constexpr std::size_t kReseedInterval = 128;

inline double modulus(Complex z) { return std::sqrt(z.real() * z.real() + z.imag() * z.imag()); }

}  // namespace

double sinc(double x) {
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(x) / x;
}

DomainConfig::DomainConfig(double domain_width, std::vector<std::int8_t> orientations, double chi0)
    : domain_width_(domain_width), orientations_(std::move(orientations)), chi0_(chi0) {
  if (!(domain_width_ > 0.0)) throw std::invalid_argument("domain width must be positive");
  if (orientations_.empty()) throw std::invalid_argument("crystal needs at least one domain");
  if (!(chi0_ > 0.0)) throw std::invalid_argument("chi0 must be positive");
  for (const auto s : orientations_) {
    if (s != 1 && s != -1) throw std::invalid_argument("domain orientations must be +1 or -1");
  }
}

DomainConfig DomainConfig::periodic(std::size_t domains, double domain_width) {
  std::vector<std::int8_t> s(domains);
  for (std::size_t i = 0; i < domains; ++i) s[i] = (i % 2 == 0) ? -1 : 1;  // (-1)^n with n = i + 1
  return DomainConfig(domain_width, std::move(s));
}

DomainConfig DomainConfig::uniform(std::size_t domains, double domain_width, int orientation) {
  return DomainConfig(domain_width, std::vector<std::int8_t>(domains, static_cast<std::int8_t>(orientation)));
}

DomainConfig DomainConfig::random(std::size_t domains, double domain_width, std::mt19937_64& rng) {
  std::vector<std::int8_t> s(domains);
  for (auto& v : s) v = (rng() >> 63) ? 1 : -1;
  return DomainConfig(domain_width, std::move(s));
}

void DomainConfig::flip(std::size_t n) {
  auto& s = orientations_.at(n);
  s = static_cast<std::int8_t>(-s);
}

Complex domain_sum(const DomainConfig& config, double dk) {
  const auto s = config.orientations();
  const Complex step = std::polar(1.0, -dk * config.domain_width());
  Complex acc{0.0, 0.0};
  for (std::size_t start = 0; start < s.size(); start += kReseedInterval) {
    const std::size_t stop = std::min(s.size(), start + kReseedInterval);
    Complex phasor = std::polar(1.0, -dk * config.origin(start));
    Complex block{0.0, 0.0};
    for (std::size_t n = start; n < stop; ++n) {
      if (s[n] > 0) {
        block += phasor;
      } else {
        block -= phasor;
      }
      phasor *= step;
    }
    acc += block;
  }
  return acc;
}

Complex evaluate_pmf(const DomainConfig& config, double dk) {
  const double l_c = config.domain_width();
  return config.chi0() * l_c * sinc(0.5 * dk * l_c) * domain_sum(config, dk);
}

double periodic_peak(std::size_t domains, double domain_width) {
  return 2.0 * static_cast<double>(domains) * domain_width / std::numbers::pi;
}

Complex evaluate_pmf_normalized(const DomainConfig& config, double dk) {
  return evaluate_pmf(config, dk) / periodic_peak(config.size(), config.domain_width());
}

double periodic_pmf_analytic(double dk, double period, double length) {
  return sinc((dk - 2.0 * std::numbers::pi / period) * length / 2.0);
}

TargetShape parse_target_shape(const std::string& name) {
  if (name == "gaussian") return TargetShape::gaussian;
  if (name == "triangle") return TargetShape::triangle;
  if (name == "rectangle") return TargetShape::rectangle;
  if (name == "custom") return TargetShape::custom;
  throw std::invalid_argument("unknown target shape '" + name + "'");
}

const char* target_shape_name(TargetShape shape) {
  switch (shape) {
    case TargetShape::gaussian: return "gaussian";
    case TargetShape::triangle: return "triangle";
    case TargetShape::rectangle: return "rectangle";
    case TargetShape::custom: return "custom";
  }
  return "?";
}

void TargetShapeSpec::validate() const {
  if (shape == TargetShape::custom) {
    if (points.size() < 2) throw std::invalid_argument("custom target needs at least two points");
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (!(points[i].second >= 0.0)) throw std::invalid_argument("custom target values must be nonnegative");
      if (i > 0 && !(points[i].first > points[i - 1].first)) {
        throw std::invalid_argument("custom target points must be sorted by strictly increasing dk");
      }
    }
    return;
  }
  if (!(width > 0.0)) throw std::invalid_argument("target width must be positive");
}

double TargetShapeSpec::relative_value(double dk) const {
  const double x = dk - center;
  switch (shape) {
    case TargetShape::gaussian:
      return std::exp(-x * x / (2.0 * width * width));
    case TargetShape::triangle:
      return std::max(0.0, 1.0 - std::abs(x) / width);
    case TargetShape::rectangle:
      return std::abs(x) <= width ? 1.0 : 0.0;
    case TargetShape::custom: {
      if (dk < points.front().first || dk > points.back().first) return 0.0;
      const auto hi = std::upper_bound(points.begin(), points.end(), dk,
                                       [](double v, const auto& p) { return v < p.first; });
      if (hi == points.end()) return points.back().second;
      const auto lo = hi - 1;
      const double t = (dk - lo->first) / (hi->first - lo->first);
      return lo->second + t * (hi->second - lo->second);
    }
  }
  return 0.0;
}

namespace {

std::vector<double> uniform_abscissas(double lo, double hi, std::size_t samples) {
  std::vector<double> x(samples);
  if (samples == 1) return {lo};
  const double step = (hi - lo) / static_cast<double>(samples - 1);
  for (std::size_t m = 0; m < samples; ++m) x[m] = lo + step * static_cast<double>(m);
  x.back() = hi;
  return x;
}

void check_range(double lo, double hi, std::size_t samples) {
  if (!(lo < hi)) throw std::invalid_argument("target range must satisfy a < b");
  if (samples < 2) throw std::invalid_argument("target needs M >= 2 samples");
}

}  // namespace

TargetFunction TargetFunction::build(TargetShapeSpec shape, double range_lo, double range_hi,
                                     std::size_t samples, double height) {
  shape.validate();
  check_range(range_lo, range_hi, samples);
  if (!(height > 0.0)) throw std::invalid_argument("target height H must be positive");

  TargetFunction t;
  t.shape_ = std::move(shape);
  t.lo_ = range_lo;
  t.hi_ = range_hi;
  t.height_ = height;
  t.abscissas_ = uniform_abscissas(range_lo, range_hi, samples);
  t.values_.resize(samples);
  for (std::size_t m = 0; m < samples; ++m) t.values_[m] = t.value(t.abscissas_[m]);
  return t;
}

TargetFunction TargetFunction::from_samples(double range_lo, double range_hi, std::vector<double> values) {
  if (values.size() == 1) {
    if (range_lo != range_hi) throw std::invalid_argument("a single sample needs a == b");
  } else {
    check_range(range_lo, range_hi, values.size());
  }
  TargetFunction t;
  t.lo_ = range_lo;
  t.hi_ = range_hi;
  t.abscissas_ = uniform_abscissas(range_lo, range_hi, values.size());
  t.shape_.shape = TargetShape::custom;
  for (std::size_t m = 0; m < values.size(); ++m) {
    if (!(values[m] >= 0.0)) throw std::invalid_argument("target samples must be nonnegative");
    t.shape_.points.emplace_back(t.abscissas_[m], values[m]);
    t.height_ = std::max(t.height_, values[m]);
  }
  if (t.height_ > 0.0) {
    for (auto& p : t.shape_.points) p.second /= t.height_;
  } else {
    t.height_ = 1.0;  // all-zero target, keep value() == 0
  }
  t.values_ = std::move(values);
  return t;
}

double TargetFunction::step() const {
  return values_.size() < 2 ? 0.0 : (hi_ - lo_) / static_cast<double>(values_.size() - 1);
}

CostMode parse_cost_mode(const std::string& name) {
  if (name == "modulus") return CostMode::modulus;
  if (name == "complex") return CostMode::complex;
  throw std::invalid_argument("unknown comparison mode '" + name + "' (expected modulus or complex)");
}

const char* cost_mode_name(CostMode mode) { return mode == CostMode::modulus ? "modulus" : "complex"; }

double cost(const DomainConfig& config, const TargetFunction& target, CostMode mode) {
  return CostCache(config, target, mode).cost();
}

CostCache::CostCache(const DomainConfig& config, const TargetFunction& target, CostMode mode)
    : target_(&target), mode_(mode) {
  const auto dk = target.abscissas();
  const double l_c = config.domain_width();
  scale_.resize(dk.size());
  for (std::size_t m = 0; m < dk.size(); ++m) {
    const double envelope = config.chi0() * l_c * sinc(0.5 * dk[m] * l_c);
    scale_[m] = mode == CostMode::complex ? envelope * std::polar(1.0, 0.5 * dk[m] * config.length())
                                          : Complex(envelope, 0.0);
  }
  sums_.resize(dk.size());
  trial_.resize(dk.size());
  refresh(config);
}

void CostCache::refresh(const DomainConfig& config) {
  const auto dk = target_->abscissas();
  for (std::size_t m = 0; m < dk.size(); ++m) sums_[m] = domain_sum(config, dk[m]);
  cost_ = total_cost(sums_);
  has_trial_ = false;
  accepted_since_refresh_ = 0;
}

double CostCache::total_cost(std::span<const Complex> sums) const {
  const auto values = target_->values();
  double total = 0.0;
  if (mode_ == CostMode::modulus) {
    for (std::size_t m = 0; m < sums.size(); ++m) {
      total += std::abs(std::abs(scale_[m].real()) * modulus(sums[m]) - values[m]);
    }
  } else {
    for (std::size_t m = 0; m < sums.size(); ++m) total += modulus(scale_[m] * sums[m] - values[m]);
  }
  return total;
}

double CostCache::propose(const DomainConfig& config, std::size_t n) {
  if (n >= config.size()) throw std::out_of_range("domain index out of range");

  const auto dk = target_->abscissas();
  const auto values = target_->values();
  const double z = config.origin(n);
  const double delta = -2.0 * config.orientation(n);
  const Complex step = std::polar(1.0, -target_->step() * z);

  double total = 0.0;
  Complex phasor;
  for (std::size_t m = 0; m < dk.size(); ++m) {
    if (m % kReseedInterval == 0) phasor = std::polar(1.0, -dk[m] * z);
    const Complex s = sums_[m] + delta * phasor;
    trial_[m] = s;
    if (mode_ == CostMode::modulus) {
      total += std::abs(std::abs(scale_[m].real()) * modulus(s) - values[m]);
    } else {
      total += modulus(scale_[m] * s - values[m]);
    }
    phasor *= step;
  }
  trial_cost_ = total;
  trial_domain_ = n;
  has_trial_ = true;
  return total;
}

void CostCache::accept(DomainConfig& config) {
  if (!has_trial_) throw std::logic_error("accept() without a pending proposal");
  config.flip(trial_domain_);
  std::swap(sums_, trial_);
  cost_ = trial_cost_;
  has_trial_ = false;
  if (++accepted_since_refresh_ >= kRefreshInterval) refresh(config);
}

double target_support_length(TargetShape shape, double width, double support_sigmas) {
  if (!(width > 0.0)) throw std::invalid_argument("target width must be positive");
  if (shape == TargetShape::gaussian) {
    if (!(support_sigmas > 0.0)) throw std::invalid_argument("support_sigmas must be positive");
    return support_sigmas / width;
  }
  return 16.0 / width;
}

ParameterSuggestion suggest_parameters(double dk_peak, TargetShape shape, double width, double support_sigmas) {
  if (!(dk_peak > 0.0)) throw std::invalid_argument("dk_peak must be positive");
  ParameterSuggestion out{};
  out.domain_width = std::numbers::pi / dk_peak;
  out.support_length = target_support_length(shape, width, support_sigmas);
  auto n = static_cast<std::size_t>(std::ceil(out.support_length / out.domain_width - 1e-9));
  if (n % 2 == 1) ++n;
  out.domains = std::max<std::size_t>(n, 2);
  out.height_max = periodic_peak(out.domains, out.domain_width);
  out.height_default = 0.4 * out.height_max;
  return out;
}

}  // namespace polingforge
