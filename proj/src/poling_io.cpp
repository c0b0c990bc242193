#include "polingforge/poling_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace polingforge {

namespace {

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Shortest decimal that reads back as `value` once multiplied by 10^-shift, written
// in plain notation (e.g. 2.34e-05 with shift 6 gives "23.4").
std::string format_scaled(double value, int shift) {
  char buf[48];
  for (int precision = 15; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof buf, "%.*e", precision - 1, value);
    if (std::strtod(buf, nullptr) == value) break;
  }
  std::string text(buf);
  const auto e = text.find('e');
  int exponent = std::stoi(text.substr(e + 1)) + shift;
  std::string mantissa = text.substr(0, e);
  const bool negative = mantissa.front() == '-';
  if (negative) mantissa.erase(0, 1);
  std::string digits;
  for (const char c : mantissa) {
    if (c != '.') digits += c;
  }
  while (digits.size() > 1 && digits.back() == '0') digits.pop_back();
  if (exponent < -6 || exponent > 20) {
    std::string out = digits.substr(0, 1);
    if (digits.size() > 1) out += "." + digits.substr(1);
    return (negative ? "-" : "") + out + "e" + std::to_string(exponent);
  }
  std::string out;
  if (exponent < 0) {
    out = "0." + std::string(static_cast<std::size_t>(-exponent - 1), '0') + digits;
  } else if (static_cast<std::size_t>(exponent) + 1 >= digits.size()) {
    out = digits + std::string(static_cast<std::size_t>(exponent) + 1 - digits.size(), '0');
  } else {
    out = digits.substr(0, static_cast<std::size_t>(exponent) + 1) + "." +
          digits.substr(static_cast<std::size_t>(exponent) + 1);
  }
  return (negative ? "-" : "") + out;
}

}  // namespace

std::string format_double(double value) {
  char buf[40];
  for (int precision = 15; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof buf, "%.*g", precision, value);
    if (std::strtod(buf, nullptr) == value) break;
  }
  return buf;
}

void write_poling_file(const std::filesystem::path& path, const DomainConfig& config, double cost, CostMode mode,
                       const std::map<std::string, std::string>& extra) {
  auto out = open_for_write(path);
  out << "# polingforge poling configuration\n";
  out << "# N = " << config.size() << "\n";
  out << "# l_c_um = " << format_scaled(config.domain_width(), 6) << "\n";
  out << "# Lambda_um = " << format_scaled(2.0 * config.domain_width(), 6) << "\n";
  out << "# cost = " << format_double(cost) << "\n";
  out << "# mode = " << cost_mode_name(mode) << "\n";
  for (const auto& [key, value] : extra) out << "# " << key << " = " << value << "\n";
  for (const auto s : config.orientations()) out << (s > 0 ? "+1\n" : "-1\n");
}

PolingFile read_poling_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open poling file " + path.string());

  std::map<std::string, std::string> header;
  std::vector<std::int8_t> orientations;
  std::string line;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& why) {
    throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": " + why);
  };
  while (std::getline(in, line)) {
    ++line_no;
    const auto text = trim(line);
    if (text.empty()) continue;
    if (text.front() == '#') {
      const auto eq = text.find('=');
      if (eq != std::string::npos) header[trim(text.substr(1, eq - 1))] = trim(text.substr(eq + 1));
      continue;
    }
    if (text == "+1" || text == "1") {
      orientations.push_back(1);
    } else if (text == "-1") {
      orientations.push_back(-1);
    } else {
      fail("expected +1 or -1, got '" + text + "'");
    }
  }

  if (!header.contains("l_c_um")) fail("missing '# l_c_um = ...' header");
  double l_c = 0.0;
  try {
    // Scaling in decimal keeps the width bit-identical to the one written.
    const auto& v = header.at("l_c_um");
    l_c = v.find_first_of("eE") == std::string::npos ? std::stod(v + "e-6") : std::stod(v) * 1e-6;
  } catch (const std::exception&) {
    fail("bad l_c_um value '" + header.at("l_c_um") + "'");
  }
  if (header.contains("N") && std::stoull(header.at("N")) != orientations.size()) {
    fail("header declares N = " + header.at("N") + " but " + std::to_string(orientations.size()) +
         " orientations follow");
  }
  if (orientations.empty()) fail("no domain orientations");

  PolingFile file{DomainConfig(l_c, std::move(orientations)), std::nullopt, "", header};
  if (header.contains("cost")) file.cost = std::stod(header.at("cost"));
  if (header.contains("mode")) file.mode = header.at("mode");
  return file;
}

void write_curve_csv(const std::filesystem::path& path, const DomainConfig& config, const TargetFunction& target) {
  auto out = open_for_write(path);
  out << "dk_rad_per_m,phi_abs_m,phi_re_m,phi_im_m,target_m\n";
  const auto dk = target.abscissas();
  const auto values = target.values();
  for (std::size_t m = 0; m < dk.size(); ++m) {
    const Complex phi = evaluate_pmf(config, dk[m]);
    out << format_double(dk[m]) << ',' << format_double(std::abs(phi)) << ',' << format_double(phi.real()) << ','
        << format_double(phi.imag()) << ',' << format_double(values[m]) << '\n';
  }
}

void write_jsa_csv(const std::filesystem::path& path, const JsaGrid& grid) {
  auto out = open_for_write(path);
  out << "omega_a_rad_s,omega_b_rad_s,re,im\n";
  char buf[128];
  for (Eigen::Index i = 0; i < grid.amplitude.rows(); ++i) {
    for (Eigen::Index j = 0; j < grid.amplitude.cols(); ++j) {
      const Complex f = grid.amplitude(i, j);
      std::snprintf(buf, sizeof buf, "%.10e,%.10e,%.8e,%.8e\n", grid.omega_a[static_cast<std::size_t>(i)],
                    grid.omega_b[static_cast<std::size_t>(j)], f.real(), f.imag());
      out << buf;
    }
  }
}

void write_schmidt_csv(const std::filesystem::path& path, std::span<const double> coefficients) {
  auto out = open_for_write(path);
  out << "k,b_k\n";
  for (std::size_t k = 0; k < coefficients.size(); ++k) out << (k + 1) << ',' << format_double(coefficients[k]) << '\n';
}

}  // namespace polingforge
