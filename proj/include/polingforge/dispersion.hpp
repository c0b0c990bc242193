#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace polingforge {

/// Speed of light in vacuum, m/s.
inline constexpr double kSpeedOfLight = 299792458.0;

/// The three interacting fields: pump p and the two daughter photons a and b.
enum class Mode { pump, a, b };

const char* mode_name(Mode mode);

/// Functional forms understood by the dispersion file (`formula_id`).
///
/// Wavelength lambda is in micrometres, omega in rad/s.
///   constant              n = c0
///   linear_omega          n = c0 + c1*omega
///   sellmeier             n^2 = 1 + sum_i B_i*lambda^2/(lambda^2 - C_i), coefficients (B1, C1, B2, C2, ...)
///   sellmeier_one_pole_ir n^2 = A + B/(1 - C/lambda^2) - D*lambda^2
///   sellmeier_two_pole_ir n^2 = A + B/(1 - C/lambda^2) + D/(1 - E/lambda^2) - F*lambda^2
enum class IndexFormula {
  constant,
  linear_omega,
  sellmeier,
  sellmeier_one_pole_ir,
  sellmeier_two_pole_ir,
};

IndexFormula parse_index_formula(const std::string& id);
const char* index_formula_id(IndexFormula formula);

/// One crystal axis: index formula, its coefficients and the wavelength window
/// (micrometres) over which the fit may be evaluated.
struct AxisDispersion {
  IndexFormula formula = IndexFormula::constant;
  std::vector<double> coefficients;
  double valid_lo_um = 0.0;
  double valid_hi_um = 0.0;

  /// Throws std::invalid_argument on a malformed coefficient list or window.
  void validate(const std::string& axis) const;
  /// Index at a wavelength given in micrometres, no window check.
  double index_at_um(double wavelength_um) const;
};

/// Which axis each mode's polarization sees.
struct ModeAxes {
  std::string pump;
  std::string a;
  std::string b;
};

/// Immutable per-axis refractive index model of a birefringent crystal.
///
/// All queries are pure; a model may be shared freely between threads.
/// Queries outside an axis' validity window throw std::out_of_range rather
/// than extrapolate.
class DispersionModel {
 public:
  DispersionModel(std::string name, std::map<std::string, AxisDispersion> axes, ModeAxes mode_axes);

  static DispersionModel from_json(const nlohmann::json& doc);
  static DispersionModel load(const std::filesystem::path& path);
  nlohmann::json to_json() const;

  const std::string& name() const { return name_; }
  const std::map<std::string, AxisDispersion>& axes() const { return axes_; }
  const ModeAxes& mode_axes() const { return mode_axes_; }
  const std::string& axis_of(Mode mode) const;

  /// Refractive index of `axis` at a vacuum wavelength in metres.
  double refractive_index(const std::string& axis, double wavelength) const;
  double refractive_index(Mode mode, double wavelength) const;

  /// k = n(2 pi c / omega) * omega / c, rad/m.
  double wavevector(Mode mode, double omega) const;

  /// dk/domega at omega, s/m, by central difference with relative step 1e-6.
  double group_slope(Mode mode, double omega) const;

  /// Delta-k = k_p(omega_a + omega_b) - k_a(omega_a) - k_b(omega_b), rad/m.
  double phase_mismatch(double omega_a, double omega_b) const;

  /// k'_p - (k'_a + k'_b)/2 at the degenerate point of a pump at `pump_wavelength`.
  double gvm_residual(double pump_wavelength) const;

  /// First-order poling period 2 pi / |Delta-k|, metres.
  ///
  /// Both signs of Delta-k are served by the same period because a real
  /// orientation pattern has Phi(-dk) = conj(Phi(dk)). Throws
  /// std::domain_error when Delta-k vanishes.
  double first_order_period(double omega_a, double omega_b) const;

  static constexpr double kDerivativeStep = 1e-6;

 private:
  const AxisDispersion& axis_data(const std::string& axis) const;

  std::string name_;
  std::map<std::string, AxisDispersion> axes_;
  ModeAxes mode_axes_;
};

/// Type-II KTP (y -> y + z) at room temperature; the same data ships as
/// data/ktp_type2.json.
DispersionModel ktp_type2();

double omega_from_wavelength(double wavelength);
double wavelength_from_omega(double omega);

}  // namespace polingforge
