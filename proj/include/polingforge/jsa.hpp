#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "polingforge/dispersion.hpp"
#include "polingforge/phasematch.hpp"

namespace polingforge {

/// How the quoted pump bandwidth maps onto the standard deviation of the
/// Gaussian spectral amplitude.
///
/// amplitude_sigma: the bandwidth is the amplitude standard deviation.
/// amplitude_fwhm:  the bandwidth is the full width at half maximum of |alpha|.
/// intensity_fwhm:  the bandwidth is the full width at half maximum of |alpha|^2.
enum class BandwidthConvention { amplitude_sigma, amplitude_fwhm, intensity_fwhm };

BandwidthConvention parse_bandwidth_convention(const std::string& name);
const char* bandwidth_convention_name(BandwidthConvention convention);

/// Gaussian pump. Wavelength and bandwidth are vacuum wavelengths in metres.
struct PumpSpec {
  double wavelength = 791e-9;
  double bandwidth = 1e-9;
  BandwidthConvention convention = BandwidthConvention::amplitude_fwhm;

  void validate() const;
  double center_omega() const;
  /// Amplitude standard deviation in wavelength, metres.
  double amplitude_sigma() const;
  /// sigma_omega = 2 pi c sigma / lambda_p^2, rad/s.
  double sigma_omega() const;
};

/// exp(-(omega - omega_p0)^2 / (2 sigma_omega^2)); unit peak.
double pump_envelope(double omega, const PumpSpec& pump);

struct GridSpec {
  std::size_t points = 512;
  double extent_sigmas = 4.0;  // half-width of each axis in units of sigma_omega

  void validate() const;
};

/// Discretized joint spectral amplitude on a uniform G x G grid.
///
/// Rows follow omega_a, columns omega_b. After normalize(),
/// sum |f_ij|^2 d_omega_a d_omega_b = 1.
struct JsaGrid {
  std::vector<double> omega_a;
  std::vector<double> omega_b;
  Eigen::MatrixXcd amplitude;
  Eigen::MatrixXd mismatch;  // Delta-k at each cell, rad/m
  std::string provenance;

  double step_a() const;
  double step_b() const;
  double norm_squared() const;
  void normalize();
  JsaGrid transposed() const;
};

using PmfFunction = std::function<Complex(double dk)>;

/// f_ij = pump_envelope(omega_a,i + omega_b,j) * pmf(Delta-k(omega_a,i, omega_b,j)),
/// L2-normalized, on a grid centred at omega_p0 / 2 in both axes.
JsaGrid build_jsa(const PmfFunction& pmf, const DispersionModel& model, const PumpSpec& pump,
                  const GridSpec& grid = {});

/// build_jsa with the crystal's raw phase-matching function.
JsaGrid build_jsa(const DomainConfig& config, const DispersionModel& model, const PumpSpec& pump,
                  const GridSpec& grid = {});

/// Zeroes every cell whose |Delta-k| lies outside [lo, hi] and renormalizes.
JsaGrid apply_band_window(JsaGrid grid, double lo, double hi);

struct SchmidtMetrics {
  double purity;
  double entropy_bits;
};

/// P = sum b_k^4 and E = -sum b_k^2 log2 b_k^2; renormalizes b when
/// sum b_k^2 is off by more than 1e-6. Throws on an empty list.
SchmidtMetrics schmidt_metrics(std::span<const double> coefficients);

struct SchmidtResult {
  std::vector<double> coefficients;  // descending, sum of squares 1
  Eigen::MatrixXcd modes_a;          // discrete orthonormal columns, present when requested
  Eigen::MatrixXcd modes_b;
  double purity;
  double entropy_bits;
};

/// Singular value decomposition of the (normalized) amplitude matrix.
/// Throws std::invalid_argument for an all-zero grid.
SchmidtResult schmidt_decompose(const JsaGrid& grid, bool with_modes = false);

/// Heralded purity for an idealized Gaussian phase-matching function of
/// width `width` (rad/m) centred on the degenerate mismatch.
double gaussian_pmf_purity(const PumpSpec& pump, const DispersionModel& model, double width,
                           const GridSpec& grid = {256, 4.0});

struct WidthOptimum {
  double width;
  double purity;
  std::size_t recommended_domains;
  std::size_t evaluations;
};

/// Golden-section search (in log width) for the Gaussian target width that
/// maximizes heralded purity, to a bracket tolerance of 1%. The domain count
/// is converted from the width through target_support_length.
WidthOptimum optimize_target_width(const PumpSpec& pump, const DispersionModel& model, double domain_width,
                                   double width_lo, double width_hi, const GridSpec& grid = {256, 4.0},
                                   double support_sigmas = 6.0);

}  // namespace polingforge
