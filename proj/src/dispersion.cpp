#include "polingforge/dispersion.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace polingforge {

namespace {

std::size_t expected_coefficients(IndexFormula formula) {
  switch (formula) {
    case IndexFormula::constant: return 1;
    case IndexFormula::linear_omega: return 2;
    case IndexFormula::sellmeier: return 0;  // any even count >= 2
    case IndexFormula::sellmeier_one_pole_ir: return 4;
    case IndexFormula::sellmeier_two_pole_ir: return 6;
  }
  return 0;
}

std::string window_text(const AxisDispersion& axis) {
  std::ostringstream out;
  out << "[" << axis.valid_lo_um << ", " << axis.valid_hi_um << "] um";
  return out.str();
}

}  // namespace

const char* mode_name(Mode mode) {
  switch (mode) {
    case Mode::pump: return "p";
    case Mode::a: return "a";
    case Mode::b: return "b";
  }
  return "?";
}

IndexFormula parse_index_formula(const std::string& id) {
  if (id == "constant") return IndexFormula::constant;
  if (id == "linear_omega") return IndexFormula::linear_omega;
  if (id == "sellmeier") return IndexFormula::sellmeier;
  if (id == "sellmeier_one_pole_ir") return IndexFormula::sellmeier_one_pole_ir;
  if (id == "sellmeier_two_pole_ir") return IndexFormula::sellmeier_two_pole_ir;
  throw std::invalid_argument("unknown formula_id '" + id + "'");
}

const char* index_formula_id(IndexFormula formula) {
  switch (formula) {
    case IndexFormula::constant: return "constant";
    case IndexFormula::linear_omega: return "linear_omega";
    case IndexFormula::sellmeier: return "sellmeier";
    case IndexFormula::sellmeier_one_pole_ir: return "sellmeier_one_pole_ir";
    case IndexFormula::sellmeier_two_pole_ir: return "sellmeier_two_pole_ir";
  }
  return "?";
}

void AxisDispersion::validate(const std::string& axis) const {
  const auto want = expected_coefficients(formula);
  const bool count_ok = formula == IndexFormula::sellmeier
                            ? (coefficients.size() >= 2 && coefficients.size() % 2 == 0)
                            : coefficients.size() == want;
  if (!count_ok) {
    throw std::invalid_argument("axis '" + axis + "': wrong number of coefficients for formula " +
                                index_formula_id(formula));
  }
  if (!(valid_lo_um > 0.0) || !(valid_hi_um > valid_lo_um)) {
    throw std::invalid_argument("axis '" + axis + "': validity window must satisfy 0 < lo < hi");
  }
  constexpr int kProbes = 257;
  for (int i = 0; i < kProbes; ++i) {
    const double lambda = valid_lo_um + (valid_hi_um - valid_lo_um) * i / (kProbes - 1);
    const double n = index_at_um(lambda);
    if (!std::isfinite(n) || n < 1.0) {
      std::ostringstream msg;
      msg << "axis '" << axis << "': index " << n << " at " << lambda
          << " um is below 1 or undefined inside the validity window";
      throw std::invalid_argument(msg.str());
    }
  }
}

double AxisDispersion::index_at_um(double lambda) const {
  const auto& c = coefficients;
  const double l2 = lambda * lambda;
  switch (formula) {
    case IndexFormula::constant:
      return c[0];
    case IndexFormula::linear_omega: {
      const double omega = 2.0 * std::numbers::pi * kSpeedOfLight / (lambda * 1e-6);
      return c[0] + c[1] * omega;
    }
    case IndexFormula::sellmeier: {
      double n2 = 1.0;
      for (std::size_t i = 0; i + 1 < c.size(); i += 2) n2 += c[i] * l2 / (l2 - c[i + 1]);
      return std::sqrt(n2);
    }
    case IndexFormula::sellmeier_one_pole_ir:
      return std::sqrt(c[0] + c[1] / (1.0 - c[2] / l2) - c[3] * l2);
    case IndexFormula::sellmeier_two_pole_ir:
      return std::sqrt(c[0] + c[1] / (1.0 - c[2] / l2) + c[3] / (1.0 - c[4] / l2) - c[5] * l2);
  }
  return std::nan("");
}

DispersionModel::DispersionModel(std::string name, std::map<std::string, AxisDispersion> axes,
                                 ModeAxes mode_axes)
    : name_(std::move(name)), axes_(std::move(axes)), mode_axes_(std::move(mode_axes)) {
  if (axes_.empty()) throw std::invalid_argument("dispersion model declares no axes");
  for (const auto& [id, axis] : axes_) axis.validate(id);
  for (const auto* assigned : {&mode_axes_.pump, &mode_axes_.a, &mode_axes_.b}) {
    if (!axes_.contains(*assigned)) {
      throw std::invalid_argument("mode_axes names undeclared axis '" + *assigned + "'");
    }
  }
}

DispersionModel DispersionModel::from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw std::invalid_argument("dispersion file must be a JSON object");
  for (const auto& [key, _] : doc.items()) {
    if (key != "name" && key != "axes" && key != "mode_axes") {
      throw std::invalid_argument("dispersion file: unknown key '" + key + "'");
    }
  }
  for (const char* key : {"name", "axes", "mode_axes"}) {
    if (!doc.contains(key)) throw std::invalid_argument(std::string("dispersion file: missing key '") + key + "'");
  }

  std::map<std::string, AxisDispersion> axes;
  for (const auto& [id, entry] : doc.at("axes").items()) {
    for (const auto& [key, _] : entry.items()) {
      if (key != "formula_id" && key != "coefficients" && key != "validity_um") {
        throw std::invalid_argument("dispersion file: axis '" + id + "' has unknown key '" + key + "'");
      }
    }
    AxisDispersion axis;
    axis.formula = parse_index_formula(entry.at("formula_id").get<std::string>());
    axis.coefficients = entry.at("coefficients").get<std::vector<double>>();
    const auto window = entry.at("validity_um").get<std::vector<double>>();
    if (window.size() != 2) throw std::invalid_argument("axis '" + id + "': validity_um must be [lo, hi]");
    axis.valid_lo_um = window[0];
    axis.valid_hi_um = window[1];
    axes.emplace(id, std::move(axis));
  }

  const auto& m = doc.at("mode_axes");
  for (const auto& [key, _] : m.items()) {
    if (key != "p" && key != "a" && key != "b") {
      throw std::invalid_argument("dispersion file: mode_axes has unknown mode '" + key + "'");
    }
  }
  ModeAxes modes{m.at("p").get<std::string>(), m.at("a").get<std::string>(), m.at("b").get<std::string>()};
  return DispersionModel(doc.at("name").get<std::string>(), std::move(axes), std::move(modes));
}

DispersionModel DispersionModel::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open dispersion file " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(path.string() + ": " + e.what());
  }
  return from_json(doc);
}

nlohmann::json DispersionModel::to_json() const {
  nlohmann::json axes = nlohmann::json::object();
  for (const auto& [id, axis] : axes_) {
    axes[id] = {{"formula_id", index_formula_id(axis.formula)},
                {"coefficients", axis.coefficients},
                {"validity_um", {axis.valid_lo_um, axis.valid_hi_um}}};
  }
  return {{"name", name_},
          {"axes", axes},
          {"mode_axes", {{"p", mode_axes_.pump}, {"a", mode_axes_.a}, {"b", mode_axes_.b}}}};
}

const std::string& DispersionModel::axis_of(Mode mode) const {
  switch (mode) {
    case Mode::pump: return mode_axes_.pump;
    case Mode::a: return mode_axes_.a;
    case Mode::b: return mode_axes_.b;
  }
  throw std::invalid_argument("bad mode");
}

const AxisDispersion& DispersionModel::axis_data(const std::string& axis) const {
  const auto it = axes_.find(axis);
  if (it == axes_.end()) throw std::invalid_argument("unknown axis '" + axis + "'");
  return it->second;
}

double DispersionModel::refractive_index(const std::string& axis, double wavelength) const {
  const auto& data = axis_data(axis);
  const double lambda_um = wavelength * 1e6;
  if (!(lambda_um >= data.valid_lo_um && lambda_um <= data.valid_hi_um)) {
    std::ostringstream msg;
    msg << "wavelength " << lambda_um << " um outside validity window " << window_text(data)
        << " of axis '" << axis << "'";
    throw std::out_of_range(msg.str());
  }
  return data.index_at_um(lambda_um);
}

double DispersionModel::refractive_index(Mode mode, double wavelength) const {
  return refractive_index(axis_of(mode), wavelength);
}

double DispersionModel::wavevector(Mode mode, double omega) const {
  if (!(omega > 0.0)) throw std::out_of_range("angular frequency must be positive");
  return refractive_index(mode, wavelength_from_omega(omega)) * omega / kSpeedOfLight;
}

double DispersionModel::group_slope(Mode mode, double omega) const {
  const double h = kDerivativeStep * omega;
  return (wavevector(mode, omega + h) - wavevector(mode, omega - h)) / (2.0 * h);
}

double DispersionModel::phase_mismatch(double omega_a, double omega_b) const {
  return wavevector(Mode::pump, omega_a + omega_b) - wavevector(Mode::a, omega_a) -
         wavevector(Mode::b, omega_b);
}

double DispersionModel::gvm_residual(double pump_wavelength) const {
  const double omega_p = omega_from_wavelength(pump_wavelength);
  const double half = 0.5 * omega_p;
  return group_slope(Mode::pump, omega_p) - 0.5 * (group_slope(Mode::a, half) + group_slope(Mode::b, half));
}

double DispersionModel::first_order_period(double omega_a, double omega_b) const {
  const double dk = phase_mismatch(omega_a, omega_b);
  if (dk == 0.0) throw std::domain_error("phase mismatch is zero: no first-order poling period exists");
  return 2.0 * std::numbers::pi / std::abs(dk);
}

DispersionModel ktp_type2() {
  std::map<std::string, AxisDispersion> axes;
  axes.emplace("y", AxisDispersion{IndexFormula::sellmeier_one_pole_ir,
                                   {2.09930, 0.922683, 0.0467695, 0.0138408}, 0.43, 3.54});
  axes.emplace("z", AxisDispersion{IndexFormula::sellmeier_two_pole_ir,
                                   {2.12725, 1.18431, 0.0514852, 0.6603, 100.00507, 0.00968956}, 0.43, 3.54});
  return DispersionModel("KTP type-II (y -> y + z), Koenig-Wong n_y, Fradkin n_z", std::move(axes),
                         ModeAxes{"y", "y", "z"});
}

double omega_from_wavelength(double wavelength) {
  return 2.0 * std::numbers::pi * kSpeedOfLight / wavelength;
}

double wavelength_from_omega(double omega) {
  return 2.0 * std::numbers::pi * kSpeedOfLight / omega;
}

}  // namespace polingforge
