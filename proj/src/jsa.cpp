#include "polingforge/jsa.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/SVD>

namespace polingforge {

namespace {

const double kFwhmPerSigma = 2.0 * std::sqrt(2.0 * std::numbers::ln2);

// Frequency axes and Delta-k for the grid, amplitude left empty.
JsaGrid grid_skeleton(const DispersionModel& model, const PumpSpec& pump, const GridSpec& spec) {
  pump.validate();
  spec.validate();
  const double center = 0.5 * pump.center_omega();
  const double half = spec.extent_sigmas * pump.sigma_omega();
  const std::size_t g = spec.points;

  JsaGrid grid;
  grid.omega_a.resize(g);
  for (std::size_t i = 0; i < g; ++i) {
    grid.omega_a[i] = center - half + 2.0 * half * static_cast<double>(i) / static_cast<double>(g - 1);
  }
  grid.omega_b = grid.omega_a;

  // k_a and k_b depend on one axis each; only the pump term needs the full grid.
  std::vector<double> k_a(g), k_b(g);
  for (std::size_t i = 0; i < g; ++i) {
    k_a[i] = model.wavevector(Mode::a, grid.omega_a[i]);
    k_b[i] = model.wavevector(Mode::b, grid.omega_b[i]);
  }
  grid.mismatch.resize(static_cast<Eigen::Index>(g), static_cast<Eigen::Index>(g));
  for (std::size_t i = 0; i < g; ++i) {
    for (std::size_t j = 0; j < g; ++j) {
      grid.mismatch(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          model.wavevector(Mode::pump, grid.omega_a[i] + grid.omega_b[j]) - k_a[i] - k_b[j];
    }
  }
  return grid;
}

void fill_amplitude(JsaGrid& grid, const PmfFunction& pmf, const PumpSpec& pump) {
  const auto g = static_cast<Eigen::Index>(grid.omega_a.size());
  grid.amplitude.resize(g, g);
  for (Eigen::Index i = 0; i < g; ++i) {
    for (Eigen::Index j = 0; j < g; ++j) {
      const double alpha = pump_envelope(grid.omega_a[static_cast<std::size_t>(i)] +
                                             grid.omega_b[static_cast<std::size_t>(j)],
                                         pump);
      grid.amplitude(i, j) = alpha == 0.0 ? Complex{} : alpha * pmf(grid.mismatch(i, j));
    }
  }
  grid.normalize();
}

}  // namespace

BandwidthConvention parse_bandwidth_convention(const std::string& name) {
  if (name == "amplitude_sigma") return BandwidthConvention::amplitude_sigma;
  if (name == "amplitude_fwhm") return BandwidthConvention::amplitude_fwhm;
  if (name == "intensity_fwhm") return BandwidthConvention::intensity_fwhm;
  throw std::invalid_argument("unknown bandwidth convention '" + name +
                              "' (expected amplitude_sigma, amplitude_fwhm or intensity_fwhm)");
}

const char* bandwidth_convention_name(BandwidthConvention convention) {
  switch (convention) {
    case BandwidthConvention::amplitude_sigma: return "amplitude_sigma";
    case BandwidthConvention::amplitude_fwhm: return "amplitude_fwhm";
    case BandwidthConvention::intensity_fwhm: return "intensity_fwhm";
  }
  return "?";
}

void PumpSpec::validate() const {
  if (!(wavelength > 0.0)) throw std::invalid_argument("pump wavelength must be positive");
  if (!(bandwidth > 0.0)) throw std::invalid_argument("pump bandwidth must be positive");
}

double PumpSpec::center_omega() const { return omega_from_wavelength(wavelength); }

double PumpSpec::amplitude_sigma() const {
  switch (convention) {
    case BandwidthConvention::amplitude_sigma: return bandwidth;
    case BandwidthConvention::amplitude_fwhm: return bandwidth / kFwhmPerSigma;
    // |alpha|^2 has standard deviation sigma / sqrt(2).
    case BandwidthConvention::intensity_fwhm: return std::sqrt(2.0) * bandwidth / kFwhmPerSigma;
  }
  return bandwidth;
}

double PumpSpec::sigma_omega() const {
  return 2.0 * std::numbers::pi * kSpeedOfLight * amplitude_sigma() / (wavelength * wavelength);
}

double pump_envelope(double omega, const PumpSpec& pump) {
  const double x = (omega - pump.center_omega()) / pump.sigma_omega();
  return std::exp(-0.5 * x * x);
}

void GridSpec::validate() const {
  if (points < 2) throw std::invalid_argument("JSA grid needs at least 2 points per axis");
  if (!(extent_sigmas > 0.0)) throw std::invalid_argument("JSA grid extent must be positive");
}

double JsaGrid::step_a() const { return (omega_a.back() - omega_a.front()) / static_cast<double>(omega_a.size() - 1); }
double JsaGrid::step_b() const { return (omega_b.back() - omega_b.front()) / static_cast<double>(omega_b.size() - 1); }

double JsaGrid::norm_squared() const { return amplitude.squaredNorm() * step_a() * step_b(); }

void JsaGrid::normalize() {
  const double n2 = norm_squared();
  if (n2 > 0.0) amplitude /= std::sqrt(n2);
}

JsaGrid JsaGrid::transposed() const {
  JsaGrid t;
  t.omega_a = omega_b;
  t.omega_b = omega_a;
  t.amplitude = amplitude.transpose();
  t.mismatch = mismatch.transpose();
  t.provenance = provenance;
  return t;
}

JsaGrid build_jsa(const PmfFunction& pmf, const DispersionModel& model, const PumpSpec& pump, const GridSpec& grid) {
  JsaGrid out = grid_skeleton(model, pump, grid);
  fill_amplitude(out, pmf, pump);
  out.provenance = "dispersion=" + model.name();
  return out;
}

JsaGrid build_jsa(const DomainConfig& config, const DispersionModel& model, const PumpSpec& pump,
                  const GridSpec& grid) {
  JsaGrid out = build_jsa([&config](double dk) { return evaluate_pmf(config, dk); }, model, pump, grid);
  out.provenance += "; N=" + std::to_string(config.size());
  return out;
}

JsaGrid apply_band_window(JsaGrid grid, double lo, double hi) {
  if (!(lo < hi)) throw std::invalid_argument("band window needs lo < hi");
  for (Eigen::Index i = 0; i < grid.amplitude.rows(); ++i) {
    for (Eigen::Index j = 0; j < grid.amplitude.cols(); ++j) {
      const double dk = std::abs(grid.mismatch(i, j));
      if (dk < lo || dk > hi) grid.amplitude(i, j) = Complex{};
    }
  }
  grid.normalize();
  return grid;
}

SchmidtMetrics schmidt_metrics(std::span<const double> coefficients) {
  if (coefficients.empty()) throw std::invalid_argument("no Schmidt coefficients");
  double total = 0.0;
  for (const double b : coefficients) total += b * b;
  if (!(total > 0.0)) throw std::invalid_argument("Schmidt coefficients are all zero");
  const double scale = std::abs(total - 1.0) > 1e-6 ? 1.0 / total : 1.0;

  double purity = 0.0;
  double entropy = 0.0;
  for (const double b : coefficients) {
    const double w = b * b * scale;
    purity += w * w;
    if (w > 0.0) entropy -= w * std::log2(w);
  }
  return {purity, std::max(0.0, entropy)};
}

SchmidtResult schmidt_decompose(const JsaGrid& grid, bool with_modes) {
  if (grid.amplitude.size() == 0 || grid.amplitude.cwiseAbs().maxCoeff() == 0.0) {
    throw std::invalid_argument("cannot decompose an all-zero joint spectral amplitude");
  }
  const Eigen::MatrixXcd weighted = grid.amplitude * std::sqrt(grid.step_a() * grid.step_b());
  const unsigned options = with_modes ? (Eigen::ComputeThinU | Eigen::ComputeThinV) : 0u;
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(weighted, options);

  const Eigen::VectorXd& sv = svd.singularValues();
  const double total = sv.squaredNorm();
  SchmidtResult out;
  out.coefficients.resize(static_cast<std::size_t>(sv.size()));
  for (Eigen::Index k = 0; k < sv.size(); ++k) {
    out.coefficients[static_cast<std::size_t>(k)] = sv(k) / std::sqrt(total);
  }
  if (with_modes) {
    out.modes_a = svd.matrixU();
    out.modes_b = svd.matrixV();
  }
  const auto metrics = schmidt_metrics(out.coefficients);
  out.purity = metrics.purity;
  out.entropy_bits = metrics.entropy_bits;
  return out;
}

namespace {

double gaussian_purity_on(JsaGrid& grid, double center, double width, const PumpSpec& pump) {
  fill_amplitude(
      grid,
      [center, width](double dk) {
        const double x = (dk - center) / width;
        return Complex(std::exp(-0.5 * x * x), 0.0);
      },
      pump);
  return schmidt_decompose(grid).purity;
}

}  // namespace

double gaussian_pmf_purity(const PumpSpec& pump, const DispersionModel& model, double width, const GridSpec& grid) {
  if (!(width > 0.0)) throw std::invalid_argument("width must be positive");
  JsaGrid skeleton = grid_skeleton(model, pump, grid);
  const double half = 0.5 * pump.center_omega();
  return gaussian_purity_on(skeleton, model.phase_mismatch(half, half), width, pump);
}

WidthOptimum optimize_target_width(const PumpSpec& pump, const DispersionModel& model, double domain_width,
                                   double width_lo, double width_hi, const GridSpec& grid, double support_sigmas) {
  if (!(width_lo > 0.0) || !(width_hi > width_lo * 1.01)) {
    throw std::invalid_argument("width bracket is degenerate (need 0 < lo and hi > 1.01 lo)");
  }
  if (!(domain_width > 0.0)) throw std::invalid_argument("domain width must be positive");

  JsaGrid skeleton = grid_skeleton(model, pump, grid);
  const double half = 0.5 * pump.center_omega();
  const double center = model.phase_mismatch(half, half);
  std::size_t evaluations = 0;
  auto purity_at_log = [&](double log_w) {
    ++evaluations;
    return gaussian_purity_on(skeleton, center, std::exp(log_w), pump);
  };

  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = std::log(width_lo);
  double hi = std::log(width_hi);
  double x1 = hi - ratio * (hi - lo);
  double x2 = lo + ratio * (hi - lo);
  double f1 = purity_at_log(x1);
  double f2 = purity_at_log(x2);
  const double tolerance = std::log(1.01);
  while (hi - lo > tolerance) {
    if (f1 >= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - ratio * (hi - lo);
      f1 = purity_at_log(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + ratio * (hi - lo);
      f2 = purity_at_log(x2);
    }
  }

  WidthOptimum out{};
  out.width = std::exp(0.5 * (lo + hi));
  out.purity = purity_at_log(0.5 * (lo + hi));
  const double support = target_support_length(TargetShape::gaussian, out.width, support_sigmas);
  auto n = static_cast<std::size_t>(std::ceil(support / domain_width));
  if (n % 2 == 1) ++n;
  out.recommended_domains = n;
  out.evaluations = evaluations;
  return out;
}

}  // namespace polingforge
